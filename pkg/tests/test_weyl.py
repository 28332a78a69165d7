import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvpulse import gates as g
from cvpulse.weyl import (
    NAMED_POINTS, canonical_coordinates, canonical_gate, classify_named_point, fold, in_chamber,
    invariants_from_coordinates, local_invariants, locally_equivalent, mirror, reachable_n,
    reachable_two,
)

from conftest import random_local, random_unitary

PI = np.pi

NAMED = [
    (g.CX, (PI / 2, 0, 0), "L"),
    (g.CV, (PI / 4, 0, 0), "C1"),
    (g.ISWAP, (PI / 2, PI / 2, 0), "A2"),
    (g.DCX, (PI / 2, PI / 2, 0), "A2"),
    (g.SWAP, (PI / 2, PI / 2, PI / 2), "A3"),
    (g.SQSWAP, (PI / 4, PI / 4, PI / 4), "B3"),
    (g.SQISWAP, (PI / 4, PI / 4, 0), "B"),
    (np.eye(4), (0, 0, 0), "O"),
]


@pytest.mark.parametrize("u, expected, label", NAMED)
def test_named_points(u, expected, label):
    p = canonical_coordinates(u)
    assert np.max(np.abs(np.array(p) - expected)) < 1e-9
    assert classify_named_point(p) == label


def test_sqrt_swap_dagger_is_the_other_vertex():
    p = canonical_coordinates(g.SQSWAP.conj().T)
    assert np.allclose(p, (3 * PI / 4, PI / 4, PI / 4))
    assert not locally_equivalent(g.SQSWAP, g.SQSWAP.conj().T)


# values tabulated by an independent implementation (G1 real, G1 imag, G2)
@pytest.mark.parametrize("u, inv", [
    (np.eye(4), (1, 0, 3)),
    (g.CX, (0, 0, 1)),
    (g.DCX, (0, 0, -1)),
    (g.SWAP, (-1, 0, -3)),
])
def test_makhlin_invariants_reference_values(u, inv):
    assert np.allclose(local_invariants(u), inv, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_invariants_two_routes_agree(seed):
    u = random_unitary(4, seed)
    p = canonical_coordinates(u)
    assert in_chamber(p)
    assert np.allclose(local_invariants(u), invariants_from_coordinates(p), atol=1e-8)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_coordinates_local_invariance(seed):
    u = random_unitary(4, seed)
    dressed = random_local(seed + 1) @ u @ random_local(seed + 2)
    assert canonical_coordinates(dressed).close_to(canonical_coordinates(u))


@settings(max_examples=100, deadline=None)
@given(st.floats(0, PI / 2), st.floats(0, PI / 2), st.floats(0, PI / 2))
def test_canonical_gate_round_trip(x, y, z):
    p = fold((x, y, z))
    assert in_chamber(p)
    assert canonical_coordinates(canonical_gate(*p)).close_to(p, 1e-7)


def test_mirror_is_the_same_class():
    p = canonical_coordinates(g.CV)
    q = mirror(p)
    assert np.allclose(q, (3 * PI / 4, 0, 0))
    assert locally_equivalent(canonical_gate(*q), g.CV)
    with pytest.raises(ValueError):
        mirror((0.3, 0.2, 0.1))


def test_classify_accepts_either_base_representative():
    assert classify_named_point((3 * PI / 4, 0, 0)) == "C1"
    assert classify_named_point((0.3, 0.2, 0.1)) is None


def test_reachability_table():
    cv, cx = PI / 4, PI / 2
    pt = {k: v for k, (v, _) in NAMED_POINTS.items()}
    assert reachable_two(cv, pt["B"])
    assert not reachable_two(cv, pt["A2"])
    assert reachable_n(cv, 3, pt["B3"])
    assert not reachable_n(cv, 3, pt["A3"])
    assert reachable_n(cx, 3, pt["A3"])
    assert reachable_two(cx, pt["A2"])


@settings(max_examples=200, deadline=None)
@given(st.floats(0, PI / 2))
def test_every_controlled_u_is_two_cv_reachable(gp):
    assert reachable_two(PI / 4, (gp, 0, 0))
    assert reachable_two(PI / 4, (PI - gp, 0, 0))


@settings(max_examples=200, deadline=None)
@given(st.floats(0, PI), st.floats(0, PI / 2), st.floats(0, PI / 2))
def test_cx_budget_covers_everything(a, b, c):
    p = fold((a, b, c))
    assert reachable_n(PI / 2, 3, p)
    if p.c == 0:
        assert reachable_two(PI / 2, p)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, PI), st.floats(0, PI / 2))
def test_predicates_are_mirror_invariant_on_base(a, b):
    p = fold((a, b, 0))
    q = mirror(p)
    for gamma in (PI / 8, PI / 4, PI / 2):
        assert reachable_two(gamma, p) == reachable_two(gamma, q)
        assert reachable_n(gamma, 3, p) == reachable_n(gamma, 3, q)


def test_reachability_argument_checks():
    with pytest.raises(ValueError):
        reachable_n(PI / 4, 2, (0, 0, 0))
    with pytest.raises(ValueError):
        reachable_two(0.0, (0, 0, 0))


def test_off_base_points_never_reachable_with_two():
    assert not reachable_two(PI / 2, (0.5, 0.3, 0.1))


def test_non_unitary_rejected():
    with pytest.raises(ValueError):
        canonical_coordinates(np.ones((4, 4)))
    with pytest.raises(ValueError):
        canonical_coordinates(np.eye(2))
