import math

import numpy as np
import pytest
from hypothesis import given, settings

from alleemap import (
    BASELINE,
    Parameters,
    Stability,
    State,
    classify_boundary_analytic,
    classify_interior_analytic,
    classify_numeric,
    coexistence_point,
    enumerate_fixed_points,
    jacobian_analytic,
    map_step,
)
from alleemap.errors import AbsentFixedPoint, NotAFixedPoint
from alleemap.fixed_points import (
    COMPLEX_PAIR,
    characteristic_at_one,
    eigenvalues,
    es_upper_root,
    fixed_point,
)

from .conftest import analytic_disagreements, parameters, random_parameters

SINK, SOURCE, SADDLE, NONHYP = (Stability.SINK, Stability.SOURCE, Stability.SADDLE,
                                Stability.NONHYPERBOLIC)


def test_coexistence_at_baseline():
    st = coexistence_point(BASELINE)
    assert st == pytest.approx((0.625, 1.914062), abs=1e-6)
    assert st == pytest.approx((0.625, 1.9140625), abs=1e-14)


def test_coexistence_absent_when_denominator_vanishes():
    assert coexistence_point(BASELINE.with_value("alpha", 10.0)) is None


def test_coexistence_absent_beyond_carrying_capacity():
    p = BASELINE.with_value("alpha", 9.4)
    assert 0.13 / (1.3 - 9.4 * 0.13) == pytest.approx(1.6667, abs=1e-4)
    assert coexistence_point(p) is None


def test_coexistence_between_one_and_s():
    p = Parameters(s=3.0, w=0.5, alpha=0.0, beta=1.0, theta=2.0)
    st = coexistence_point(p)
    assert st.x == 2.0 and st.y > 0


def test_enumerate_baseline():
    fps = enumerate_fixed_points(BASELINE)
    assert [fp.name for fp in fps] == ["E0", "Es", "E1", "Eplus"]
    locs = np.array([fp.location for fp in fps])
    assert locs == pytest.approx(np.array([(0, 0), (0.0125, 0), (1, 0), (0.625, 1.914062)]),
                                 abs=1e-6)
    tags = [fp.kind.tag for fp in fps]
    assert tags == [SINK, SADDLE, SADDLE, SINK]


def test_enumerate_weak_allee():
    assert [fp.name for fp in enumerate_fixed_points(BASELINE.with_value("s", -0.1))] == \
        ["E0", "E1", "Eplus"]


def test_enumerate_s_zero_merges_es_with_origin():
    fps = enumerate_fixed_points(BASELINE.with_value("s", 0.0))
    assert [fp.name for fp in fps] == ["E0", "E1", "Eplus"]
    assert len({tuple(fp.location) for fp in fps}) == 3


def test_eplus_colliding_with_e1_is_not_duplicated():
    # theta/(beta - alpha theta) = 1 exactly
    p = Parameters(s=0.0125, w=0.125, alpha=0.0, beta=1.0, theta=1.0)
    assert [fp.name for fp in enumerate_fixed_points(p)] == ["E0", "Es", "E1"]


@settings(max_examples=500, deadline=None)
@given(parameters())
def test_existence_count(p):
    fps = enumerate_fixed_points(p)
    names = [fp.name for fp in fps]
    assert names[0] == "E0" and "E1" in names
    has_es = p.s > 1e-12 and abs(p.s - 1.0) > 1e-12
    assert ("Es" in names) == has_es
    interior = coexistence_point(p)
    if interior is not None and "Eplus" not in names:
        # only dropped when it coincides with a boundary point
        assert min(abs(interior.x - 1.0), abs(interior.x - p.s)) <= 1e-12
    assert len(fps) == 2 + has_es + ("Eplus" in names)


@settings(max_examples=500, deadline=None)
@given(parameters())
def test_fixed_point_residual(p):
    for fp in enumerate_fixed_points(p):
        st = fp.location
        assert np.max(np.abs(np.subtract(map_step(p, st), st))) <= 1e-12 * max(1.0, abs(st.y))


@settings(max_examples=500, deadline=None)
@given(parameters())
def test_eigenvalues_are_those_of_the_jacobian(p):
    for fp in enumerate_fixed_points(p):
        jac = jacobian_analytic(p, fp.location)
        ref = sorted(np.linalg.eigvals(jac), key=lambda z: (z.real, z.imag))
        got = sorted(fp.eigenvalues, key=lambda z: (z.real, z.imag))
        # a double root is only resolved to about sqrt(machine epsilon)
        assert np.allclose(got, ref, rtol=1e-9, atol=1e-7)


def test_eigenvalues_by_quadratic_formula():
    assert eigenvalues([[0.0, -1.0], [1.0, 0.0]]) == (1j, -1j)
    assert sorted(eigenvalues([[2.0, 0.0], [0.0, 0.5]]), key=abs) == [0.5, 2.0]


def test_classify_numeric_examples():
    assert classify_numeric(BASELINE, State(0.0, 0.0)).tag is SINK
    assert classify_numeric(BASELINE, State(1.0, 0.0)).tag is SADDLE
    p = BASELINE.with_value("beta", 1.35)
    fp = fixed_point(p, "Eplus")
    assert fp.kind.tag is SOURCE
    assert fp.eigenvalues[0].imag != 0 and abs(fp.eigenvalues[0]) > 1


def test_classify_numeric_rejects_non_fixed_points():
    with pytest.raises(NotAFixedPoint):
        classify_numeric(BASELINE, State(0.5, 1.0))


def test_classify_numeric_margin():
    p = BASELINE.with_value("s", 1.0)
    # E1 prey eigenvalue is exactly one at s = 1
    assert classify_numeric(p, State(1.0, 0.0)).tag is NONHYP


def test_boundary_analytic_examples():
    assert classify_boundary_analytic(BASELINE, "E0").tag is SINK
    p = Parameters(s=2.0, w=1.0, alpha=8.4, beta=1.3, theta=0.13)
    assert es_upper_root(1.0) == pytest.approx((3 + math.sqrt(17)) / 2)
    assert classify_boundary_analytic(p, "Es").tag is SADDLE
    assert classify_numeric(p, State(2.0, 0.0)).tag is SADDLE
    q = Parameters(s=2.0, w=1.0, alpha=10.0, beta=1.3, theta=0.13)
    assert classify_boundary_analytic(q, "Es").tag is SINK
    assert classify_numeric(q, State(2.0, 0.0)).tag is SINK


def test_boundary_analytic_e1_regimes():
    # s < 1 < ratio: sink
    p = Parameters(s=0.5, w=1.0, alpha=0.0, beta=1.0, theta=1.5)
    assert classify_boundary_analytic(p, "E1").tag is SINK
    # max(s, ratio) < 1: saddle
    assert classify_boundary_analytic(BASELINE, "E1").tag is SADDLE
    # beta = alpha theta: predator always declines
    q = BASELINE.with_value("alpha", 10.0)
    assert classify_boundary_analytic(q, "E1").tag is SINK


def test_es_absent_for_nonpositive_s():
    with pytest.raises(AbsentFixedPoint):
        classify_boundary_analytic(BASELINE.with_value("s", -0.05), "Es")


def test_es_upper_root_boundary():
    for w in (0.1, 0.5, 1.0, 2.5):
        s_plus = es_upper_root(w)
        p = Parameters(s=s_plus, w=w, alpha=8.4, beta=1.3, theta=0.13)
        # the prey eigenvalue 1 - s(s-1)/(s+w) sits at -1
        prey = min(fixed_point(p, "Es").eigenvalues, key=lambda z: z.real)
        assert abs(abs(prey) - 1.0) <= 1e-10
        assert classify_boundary_analytic(p, "Es").tag is NONHYP


def test_interior_analytic_examples():
    assert classify_interior_analytic(BASELINE).tag is SINK
    crit = classify_interior_analytic(BASELINE.with_value("beta", 1.3449953))
    assert crit.tag is NONHYP and crit.detail == COMPLEX_PAIR
    assert classify_interior_analytic(BASELINE.with_value("beta", 1.35)).tag is SOURCE


def test_interior_absent():
    with pytest.raises(AbsentFixedPoint):
        classify_interior_analytic(BASELINE.with_value("alpha", 9.4))


@settings(max_examples=500, deadline=None)
@given(parameters())
def test_characteristic_positive_at_one(p):
    if coexistence_point(p) is not None:
        assert characteristic_at_one(p) > 0


def test_analytic_agrees_with_numeric(rng):
    assert analytic_disagreements(random_parameters(rng, 10_000)) == []


@settings(max_examples=300, deadline=None)
@given(parameters())
def test_analytic_agrees_with_numeric_property(p):
    assert analytic_disagreements([p]) == []
