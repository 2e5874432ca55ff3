import os

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bmokit.circle_fn import AnalyticSeries, FourierSeries

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

finite = st.floats(-2, 2, allow_nan=False, allow_infinity=False)


@st.composite
def disk_points(draw, r_max=0.95):
    r = draw(st.floats(0, r_max))
    t = draw(st.floats(0, 2 * np.pi))
    return complex(r * np.cos(t), r * np.sin(t))


@st.composite
def analytic_series(draw, max_degree=8, nonconstant=False):
    n = draw(st.integers(1 if nonconstant else 0, max_degree))
    re = draw(st.lists(finite, min_size=n + 1, max_size=n + 1))
    im = draw(st.lists(finite, min_size=n + 1, max_size=n + 1))
    a = np.array(re) + 1j * np.array(im)
    if nonconstant and np.all(a[1:] == 0):
        a[n] = 1.0
    return AnalyticSeries(a)


@st.composite
def real_series(draw, max_degree=8, nonconstant=False):
    n = draw(st.integers(1 if nonconstant else 0, max_degree))
    re = draw(st.lists(finite, min_size=n + 1, max_size=n + 1))
    im = draw(st.lists(finite, min_size=n, max_size=n))
    pos = np.array(re[1:]) + 1j * np.array(im)
    if nonconstant and np.all(pos == 0):
        pos[-1] = 1.0
    c = np.r_[np.conj(pos[::-1]), re[0], pos]
    return FourierSeries(c, is_real=True)


@st.composite
def complex_series(draw, max_degree=8):
    n = draw(st.integers(0, max_degree))
    re = draw(st.lists(finite, min_size=2 * n + 1, max_size=2 * n + 1))
    im = draw(st.lists(finite, min_size=2 * n + 1, max_size=2 * n + 1))
    return FourierSeries(np.array(re) + 1j * np.array(im))


def cos_theta() -> FourierSeries:
    return FourierSeries(np.array([0.5, 0, 0.5], dtype=complex), is_real=True)


def brute_circle_mean(fun, M=1 << 14):
    """Plain midpoint average of ``fun(theta)`` over the circle."""
    t = 2 * np.pi * (np.arange(M) + 0.5) / M
    return np.mean(fun(t))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
