import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alleemap import (
    BASELINE,
    BASELINE_RAW,
    DomainError,
    Parameters,
    RawParameters,
    State,
    iterate_orbit,
    jacobian_analytic,
    jacobian_fd,
    map_step,
    nondimensionalize,
)
from alleemap.model import Divergence

from .conftest import parameters

states = st.tuples(st.floats(0.0, 3.0), st.floats(0.0, 5.0))


def test_baseline_raw_parameters():
    p = nondimensionalize(BASELINE_RAW)
    assert p.s == pytest.approx(0.0125, rel=1e-12)
    assert p.w == pytest.approx(0.125, rel=1e-12)
    assert p.alpha == pytest.approx(8.4, rel=1e-12)
    assert p.beta == pytest.approx(1.29930, abs=5e-6)
    assert p.theta == pytest.approx(0.12993, abs=5e-6)


def test_unit_raw_parameters():
    p = nondimensionalize(RawParameters(r=1, K=1, p=0, q=1, a=1, h=1, b=1, c=1))
    assert p.as_dict() == dict(s=0, w=1, alpha=1, beta=1, theta=1)


def test_weak_allee_raw_parameters():
    p = nondimensionalize(RawParameters(r=2, K=2, p=-0.5, q=1, a=1, h=0.5, b=1, c=0.5))
    assert tuple(p.as_dict().values()) == pytest.approx((-0.25, 0.5, 1.0, 1.0, 0.25), abs=1e-15)


@pytest.mark.parametrize("field", ["r", "K", "q", "a", "h", "b", "c"])
def test_raw_parameter_errors_name_the_field(field):
    values = dict(BASELINE_RAW.__dict__)
    values[field] = 0.0
    with pytest.raises(DomainError, match=f"raw parameter {field}"):
        RawParameters(**values)


@pytest.mark.parametrize("bad", [dict(w=0.0), dict(alpha=-1.0), dict(beta=0.0),
                                 dict(theta=-0.1), dict(s=-0.2, w=0.1)])
def test_parameter_invariants(bad):
    with pytest.raises(DomainError):
        Parameters(**{**BASELINE.as_dict(), **bad})


def test_map_fixed_states():
    assert map_step(BASELINE, State(0.0, 0.0)) == (0.0, 0.0)
    assert map_step(BASELINE, State(1.0, 0.0)) == (1.0, 0.0)


def test_map_step_value():
    # exponents by hand: 0.5*0.4875/0.625 - 1/5.2 and 0.65/5.2 - 0.13
    ex = 0.5 * 0.4875 / 0.625 - 1.0 / 5.2
    ey = 1.3 * 0.5 / 5.2 - 0.13
    x, y = map_step(BASELINE, State(0.5, 1.0))
    assert x == pytest.approx(0.5 * math.exp(ex), rel=1e-15)
    assert y == pytest.approx(math.exp(ey), rel=1e-15)
    # the six-digit reference 0.609295 is off by one in the last place
    assert (x, y) == pytest.approx((0.609295, 0.995012), rel=5e-6)
    assert (x, y) == pytest.approx((0.6092937, 0.9950125), abs=1e-7)


@settings(max_examples=300, deadline=None)
@given(parameters(), states)
def test_axes_invariant(p, xy):
    x, y = xy
    assert map_step(p, State(0.0, y)).x == 0.0
    assert map_step(p, State(x, 0.0)).y == 0.0


@settings(max_examples=300, deadline=None)
@given(parameters(), st.floats(1e-6, 3.0), st.floats(1e-6, 5.0))
def test_positivity(p, x, y):
    nx, ny = map_step(p, State(x, y))
    assert nx > 0 and ny > 0


def test_divergence_is_flagged():
    p = Parameters(s=0.0, w=1.0, alpha=0.0, beta=1000.0, theta=0.1)
    with pytest.raises(Divergence):
        map_step(p, State(1.0, 1.0))
    with pytest.raises(Divergence):
        map_step(BASELINE, State(0.5, 1.0), cap=-1.0)


def test_orbit_records_divergence_index():
    p = Parameters(s=0.0, w=1.0, alpha=0.0, beta=1000.0, theta=0.1)
    orbit = iterate_orbit(p, State(1.0, 1.0), 3, 5)
    assert orbit.diverged and orbit.diverged_at == 0 and orbit.kept_len == 0
    # prey climbing away from the threshold: the exponent grows past a low cap
    orbit = iterate_orbit(BASELINE, State(0.02, 0.0), 2, 50, cap=0.3)
    assert orbit.diverged and orbit.diverged_at == 12
    assert orbit.kept_len == len(orbit.states) == 10


def test_orbit_converges_to_coexistence():
    orbit = iterate_orbit(BASELINE, State(0.5, 1.0), 10_000, 100)
    assert orbit.kept_len == len(orbit.states) == 100
    assert np.max(np.abs(orbit.states - [0.625, 1.9140625])) < 1e-6


def test_orbit_at_prey_equilibrium():
    orbit = iterate_orbit(BASELINE, State(1.0, 0.0), 0, 5)
    assert orbit.states.tolist() == [[1.0, 0.0]] * 5


def test_orbit_collapses_past_threshold():
    p = BASELINE.with_value("s", 0.26)
    orbit = iterate_orbit(p, State(0.5, 1.0), 100_000, 10)
    assert np.all(np.abs(orbit.states) < 1e-8)


def test_orbit_steps_match_map_step_bitwise():
    orbit = iterate_orbit(BASELINE.with_value("beta", 1.35), State(0.5, 1.0), 7, 50)
    for a, b in zip(orbit.states[:-1], orbit.states[1:]):
        assert tuple(map_step(BASELINE.with_value("beta", 1.35), State(*a))) == tuple(b)


def test_orbit_deterministic():
    a = iterate_orbit(BASELINE, State(0.3, 0.7), 500, 300)
    b = iterate_orbit(BASELINE, State(0.3, 0.7), 500, 300)
    assert a.states.tobytes() == b.states.tobytes()


def test_orbit_argument_errors():
    with pytest.raises(DomainError):
        iterate_orbit(BASELINE, State(0.5, 1.0), -1, 5)
    with pytest.raises(DomainError):
        iterate_orbit(BASELINE, State(0.5, 1.0), 0, 0)


def test_jacobian_at_origin():
    jac = jacobian_analytic(BASELINE, State(0.0, 0.0))
    assert jac == pytest.approx(np.diag([math.exp(-0.1), math.exp(-0.13)]), abs=1e-15)
    assert np.diag(jac) == pytest.approx([0.904837, 0.878095], abs=1e-6)
    fd = jacobian_fd(BASELINE, State(0.0, 0.0), 1e-6)
    assert np.diag(fd) == pytest.approx(np.diag(jac), abs=1e-8)


def test_jacobian_at_coexistence():
    x, y = 0.625, 1.9140625
    jac = jacobian_analytic(BASELINE, State(x, y))
    assert jac[1, 1] == pytest.approx(1.0, abs=1e-15)
    assert jac[1, 0] == pytest.approx(1.3 * y / (1 + 8.4 * x) ** 2, rel=1e-12)
    fd = jacobian_fd(BASELINE, State(x, y), 1e-6)
    assert fd[1, 0] == pytest.approx(1.3 * y / (1 + 8.4 * x) ** 2, abs=1e-6)


def test_jacobian_matches_fd_at_sample_state():
    ja = jacobian_analytic(BASELINE, State(0.5, 1.0))
    jf = jacobian_fd(BASELINE, State(0.5, 1.0), 1e-6)
    assert np.max(np.abs(ja - jf)) <= 1e-6 * np.max(np.abs(ja))


def test_jacobian_agreement_random(rng):
    from .conftest import random_parameters

    worst = 0.0
    for p in random_parameters(rng, 1000):
        st0 = State(rng.uniform(0.0, 3.0), rng.uniform(0.0, 5.0))
        ja = jacobian_analytic(p, st0)
        jf = jacobian_fd(p, st0, 1e-6)
        worst = max(worst, np.max(np.abs(ja - jf)) / (1 + np.max(np.abs(ja))))
    assert worst <= 1e-5


@pytest.mark.parametrize("st0", [State(0.5, 1.0), State(0.05, 0.3), State(2.0, 3.0)])
def test_fd_error_is_second_order(st0):
    p = Parameters(s=0.1, w=0.3, alpha=2.0, beta=1.0, theta=0.2)
    ja = jacobian_analytic(p, st0)
    e1 = np.max(np.abs(jacobian_fd(p, st0, 1e-2) - ja))
    e2 = np.max(np.abs(jacobian_fd(p, st0, 5e-3) - ja))
    assert 3.0 < e1 / e2 < 5.0


def test_fd_step_must_stay_in_domain():
    with pytest.raises(DomainError):
        jacobian_fd(BASELINE, State(0.0, 0.0), h=0.2)
    with pytest.raises(DomainError):
        jacobian_fd(BASELINE, State(0.5, 0.5), h=0.0)
