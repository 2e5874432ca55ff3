import csv
import json

import pytest

from bmokit.corpus import CorpusSpec
from bmokit.errors import BMOError, DomainError
from bmokit.suite import (NO_TIMESTAMP_ENV, PROFILES, Task, _run_task, default_corpus,
                          dumps_report, get_profile, run_suite, write_plot_data)

SMALL_CORPUS = [CorpusSpec("monomial", params={"n": 1}),
                CorpusSpec("random_real", 4, 5, 1)]


def test_profiles_match_documented_sizes():
    assert (PROFILES["fast"].circle_M, PROFILES["fast"].grid_n, PROFILES["fast"].N_max) == \
        (1024, 64, 64)
    assert (PROFILES["default"].circle_M, PROFILES["default"].grid_n,
            PROFILES["default"].N_max) == (4096, 128, 512)
    t = PROFILES["thorough"]
    assert (t.circle_M, t.grid_n) == (16384, 256)
    assert t.scheme.M_ang == 2 * PROFILES["default"].scheme.M_ang


def test_unknown_profile():
    with pytest.raises(BMOError):
        get_profile("huge")


def test_empty_corpus_gives_empty_report(monkeypatch):
    monkeypatch.setenv(NO_TIMESTAMP_ENV, "1")
    rep = run_suite([], "fast")
    assert rep["checks"] == []
    assert rep["summary"]["pass"] == 0 and rep["summary"]["fail"] == 0
    assert "generated_at" not in rep


def test_timestamp_present_by_default(monkeypatch):
    monkeypatch.delenv(NO_TIMESTAMP_ENV, raising=False)
    assert "generated_at" in run_suite([], "fast")


def test_errors_are_recorded_not_raised():
    def boom():
        raise DomainError("bad input")

    (rec,) = _run_task(Task("boom", boom, "f"))
    assert rec["kind"] == "error" and rec["pass"] is False
    assert rec["function"] == "f" and "bad input" in rec["message"]


def test_degree_over_profile_limit():
    with pytest.raises(BMOError, match="exceeds"):
        run_suite([CorpusSpec("random_analytic", 100, 0, 1)], "fast")


@pytest.fixture(scope="module")
def small_reports():
    import os
    old = os.environ.get(NO_TIMESTAMP_ENV)
    os.environ[NO_TIMESTAMP_ENV] = "1"
    try:
        a = dumps_report(run_suite(SMALL_CORPUS, "fast", seed=42, threads=1))
        b = dumps_report(run_suite(SMALL_CORPUS, "fast", seed=42, threads=3))
    finally:
        if old is None:
            del os.environ[NO_TIMESTAMP_ENV]
        else:
            os.environ[NO_TIMESTAMP_ENV] = old
    return a, b


def test_small_suite_passes(small_reports):
    rep = json.loads(small_reports[0])
    s = rep["summary"]
    assert s["fail"] == 0 and s["errors"] == 0 and s["pass"] > 50
    assert rep["seed"] == 42 and rep["profile"]["name"] == "fast"
    kinds = {c["kind"] for c in rep["checks"]}
    assert kinds == {"identity", "inequality"}
    assert "theorem1" in s["extremal_ratios"] and "theorem2" in s["extremal_ratios"]


def test_suite_deterministic_across_threads(small_reports):
    a, b = small_reports
    assert a == b


def test_default_corpus_shape():
    specs = default_corpus(PROFILES["default"], 7)
    gens = [s.generator for s in specs]
    assert gens.count("random_analytic") == 1 and "log" in gens and "log_real" in gens
    assert specs[0].count == 10 and specs[0].seed == 7


def test_plot_data(tmp_path):
    members = [m for s in SMALL_CORPUS for m in s.build()]
    paths = write_plot_data(members, PROFILES["fast"], tmp_path)
    names = sorted(p.name for p in paths)
    assert any(n.startswith("garsia_") for n in names)
    assert any(n.startswith("jn_") for n in names)
    assert any(n.startswith("levelsets_") for n in names)
    jn = next(p for p in paths if p.name.startswith("jn_monomial"))
    rows = list(csv.DictReader(jn.open()))
    assert len(rows) == 49
    assert all(float(r["integral"]) < float(r["bound"]) for r in rows)
