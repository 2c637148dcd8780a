import numpy as np
import pytest
from hypothesis import strategies as st

from alleemap import Parameters, Stability, classify_boundary_analytic, enumerate_fixed_points

#: PASS/FAIL lines from the acceptance suite, echoed in the terminal summary.
RESULTS = []


@st.composite
def parameters(draw, s_max=4.0):
    w = draw(st.floats(0.02, 3.0))
    s = draw(st.floats(-0.95 * w, s_max))
    alpha = draw(st.floats(0.0, 12.0))
    beta = draw(st.floats(0.05, 3.0))
    theta = draw(st.floats(0.01, 1.0))
    return Parameters(s=s, w=w, alpha=alpha, beta=beta, theta=theta)


def random_parameters(rng, n):
    """Admissible parameter tuples spread over every fixed-point regime."""
    out = []
    for _ in range(n):
        w = rng.uniform(0.02, 3.0)
        s = rng.uniform(-0.95 * w, 4.0)
        alpha = rng.choice([0.0, rng.uniform(0.0, 12.0)], p=[0.1, 0.9])
        theta = rng.uniform(0.01, 1.0)
        # bias beta so that beta - alpha*theta takes both signs and zero
        beta = alpha * theta * rng.uniform(0.5, 3.0) + rng.uniform(0.0, 0.5)
        if rng.random() < 0.05:
            beta = alpha * theta if alpha > 0 else beta
        if beta <= 0:
            beta = 0.1
        out.append(Parameters(s=s, w=w, alpha=float(alpha), beta=beta, theta=theta))
    return out


def analytic_disagreements(samples, margin=1e-6):
    bad = []
    for p in samples:
        for fp in enumerate_fixed_points(p, margin):
            if fp.kind.tag is Stability.NONHYPERBOLIC:
                continue
            analytic = classify_boundary_analytic(p, fp.name, margin)
            if analytic.tag is not fp.kind.tag:
                bad.append((p, fp.name, fp.kind.tag, analytic.tag))
    return bad


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
