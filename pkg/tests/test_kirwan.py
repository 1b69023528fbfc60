import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import lsq_linear

from ktoric.fixtures import load_fixture, product_of_lines, projective_space
from ktoric.kirwan import (
    SampleOnInvariantSet,
    build_delzant_data,
    empty_face_equivalence,
    critical_values_Z,
    draw_flow_samples,
    eliminate_J,
    flow_check_all,
    flow_retraction_check,
    gradient_flow,
    kernel_generators,
    moment_map_value,
    nearest_point_shifted_cone,
    negative_coordinate_set,
    nonface_duality,
    presentation,
    relations_J,
)
from ktoric.ring import GroupRingElem, euler_class, monomial

F = Fraction
CP1 = projective_space(1)
CP2 = projective_space(2)
SQUARE = product_of_lines(2)


def _unit(i, N):
    return tuple(1 if j == i else 0 for j in range(N))


def test_delzant_data_examples():
    D = build_delzant_data(CP1)
    assert D.iota.tolist() == [[1], [1]]
    assert D.alphas == [(1,), (1,)] and D.iota_star_eta == (1,)
    D = build_delzant_data(CP2)
    assert D.alphas == [(1,)] * 3 and D.iota_star_eta == (1,)
    D = build_delzant_data(SQUARE)
    assert D.k == 2
    assert D.iota.columns() == [(1, 1, 0, 0), (0, 0, 1, 1)]
    assert D.alphas == [(1, 0), (1, 0), (0, 1), (0, 1)]
    assert D.iota_star_eta == (1, 1)


def test_delzant_data_invariants(delzant):
    D = build_delzant_data(delzant)
    assert D.k == D.N - D.n
    assert all(x == 0 for row in D.beta @ D.iota for x in row)


def test_moment_map_examples():
    D = build_delzant_data(CP1)
    assert moment_map_value(D, [0, 0]) == (1,)
    assert moment_map_value(D, [2, 0]) == (0,)
    D = build_delzant_data(SQUARE)
    assert moment_map_value(D, [2, 0, 2, 0]) == (0, 0)


def test_nearest_point_examples():
    assert nearest_point_shifted_cone([(1, 0)], (0, 0)) == (0, 0)
    assert nearest_point_shifted_cone([(1,)], (-1,)) == (0,)
    assert nearest_point_shifted_cone([(0, 1)], (-1, -1)) == (-1, 0)
    assert nearest_point_shifted_cone([], (3, -4)) == (3, -4)


def _cone_oracle(G, shift):
    """Float minimiser of ``|shift + G c|`` over ``c >= 0``."""
    c = lsq_linear(G, -shift, bounds=(0, np.inf), tol=1e-13, method="bvls").x
    return shift + G @ c


vec2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


@given(st.lists(vec2, max_size=5), vec2)
@settings(max_examples=200, deadline=None)
def test_nearest_point_matches_bounded_least_squares(gens, shift):
    p = nearest_point_shifted_cone(gens, shift)
    s = np.array(shift, dtype=float)
    if gens:
        G = np.array(gens, dtype=float).T
        q = _cone_oracle(G, s)
    else:
        q = s
    assert np.allclose([float(x) for x in p], q, atol=1e-6)


def test_critical_values_examples():
    assert [c.xi for c in critical_values_Z(build_delzant_data(CP1))] == [(0,), (-1,)]
    assert [c.xi for c in critical_values_Z(build_delzant_data(CP2))] == [(0,), (-1,)]
    Z = critical_values_Z(build_delzant_data(SQUARE))
    assert {c.xi for c in Z} == {(0, 0), (-1, 0), (0, -1), (-1, -1)}


def test_critical_values_brute_force_oracle(delzant):
    """Z from a float projected-gradient solver over all subsets."""
    D = build_delzant_data(delzant)
    from itertools import combinations

    exact = {tuple(float(x) for x in c.xi) for c in critical_values_Z(D)}
    shift = -np.array([float(x) for x in D.iota_star_eta])
    found = set()
    for r in range(D.N + 1):
        for A in combinations(range(D.N), r):
            if A:
                G = np.array([D.alphas[i] for i in A], dtype=float).T
                q = _cone_oracle(G, shift)
            else:
                q = shift
            found.add(tuple(q))

    def near(a, b):
        return np.allclose(a, b, atol=1e-6)

    assert all(any(near(q, xi) for xi in exact) for q in found)
    assert all(any(near(q, xi) for q in found) for xi in exact)
    assert len(exact) <= 2 ** D.N
    assert tuple(0.0 for _ in range(D.k)) in exact


def test_negative_coordinate_set_examples():
    assert negative_coordinate_set(build_delzant_data(CP1), (-1,)) == {0, 1}
    D = build_delzant_data(SQUARE)
    assert negative_coordinate_set(D, (-1, 0)) == {0, 1}
    assert negative_coordinate_set(D, (0, 0)) == frozenset()


def test_generators_examples():
    assert kernel_generators(CP1) == [euler_class([(1, 0), (0, 1)])]
    assert kernel_generators(SQUARE) == [
        euler_class([_unit(0, 4), _unit(1, 4)]),
        euler_class([_unit(2, 4), _unit(3, 4)]),
    ]
    assert kernel_generators(CP2) == [euler_class([_unit(i, 3) for i in range(3)])]
    assert relations_J(build_delzant_data(CP1)) == [monomial((-1, 1)) - 1]
    assert relations_J(build_delzant_data(SQUARE)) == [monomial((-1, 1, 0, 0)) - 1, monomial((0, 0, -1, 1)) - 1]
    assert relations_J(build_delzant_data(CP2)) == [monomial((-1, 0, 1)) - 1, monomial((0, -1, 1)) - 1]


def test_presentation_and_elimination():
    pres = presentation(CP1)
    assert pres.to_dict() == {
        "generators": 2,
        "I": [{"element": "1 - x2^-1 - x1^-1 + x1^-1*x2^-1", "S": [1, 2]}],
        "J": [{"element": "-1 + x1^-1*x2", "m": [1]}],
        "nonfaces": [[1, 2]],
    }
    red = eliminate_J(presentation(SQUARE))
    x, y = monomial((-1, 0)), monomial((0, -1))
    assert list(red.gens) == [(1 - x) ** 2, (1 - y) ** 2]
    for n in (1, 2, 3):
        red = eliminate_J(presentation(projective_space(n)))
        assert list(red.gens) == [(1 - monomial((-1,))) ** (n + 1)]


def test_nonface_duality_negative_side(delzant):
    D = build_delzant_data(delzant)
    for row in nonface_duality(D):
        assert row["negative_on_S"]
        assert row["nonnegative_on_A"]
        assert row["negative_set_is_S"]


def test_empty_face_equivalence(delzant):
    for A, empty, missing in empty_face_equivalence(build_delzant_data(delzant)):
        assert empty == missing, A


def test_gradient_flow_examples():
    D = build_delzant_data(CP1)
    z0 = np.array([1, 1], dtype=complex)
    assert np.allclose(gradient_flow(D, (-1,), z0, 0), z0)
    assert np.allclose(gradient_flow(D, (-1,), z0, 1), np.exp(-1))
    Dsq = build_delzant_data(SQUARE)
    z = gradient_flow(Dsq, (-1, 0), np.array([1, 2, 3j, 4]), 2.5)
    assert np.allclose(z[2:], [3j, 4])


def test_flow_value_is_closed_form():
    """The flow of ``<Phi, xi>`` equals the finite-difference descent of the
    quadratic form, checked by differentiating numerically."""
    D = build_delzant_data(SQUARE)
    xi = (-1, 0)
    z0 = np.array([0.3, 0.2, 0.5, 0.1], dtype=complex)

    def phi(z):
        base = np.array([float(x) for x in D.iota_star_eta])
        val = base - 0.5 * sum(abs(z[i]) ** 2 * np.array(D.alphas[i], dtype=float) for i in range(D.N))
        return float(val @ np.array(xi, dtype=float))

    h = 1e-6
    for t in (0.0, 0.4, 1.3):
        z = gradient_flow(D, xi, z0, t)
        dz = (gradient_flow(D, xi, z0, t + h) - gradient_flow(D, xi, z0, t - h)) / (2 * h)
        # the velocity is minus the gradient of phi at z
        grad = np.array([
            (phi(z + h * e) - phi(z - h * e)) / (2 * h) for e in np.eye(D.N)
        ])
        assert np.allclose(dz.real, -grad, atol=1e-5)


def test_flow_check_examples():
    D = build_delzant_data(CP1)
    rep = flow_retraction_check(D, (-1,), [np.array([0.1, 0.1])])
    assert rep.passed
    assert rep.samples[0].hit_time == 0.0
    rep = flow_retraction_check(D, (-1,), [np.array([0.9, 0.9])])
    assert rep.passed and rep.samples[0].hit_time > 0
    with pytest.raises(SampleOnInvariantSet):
        flow_retraction_check(D, (-1,), [np.array([0, 0])])
    rep = flow_retraction_check(D, (0,), [])
    assert rep.skipped


def test_flow_check_rejects_bad_epsilon():
    D = build_delzant_data(CP1)
    with pytest.raises(ValueError):
        flow_retraction_check(D, (-1,), [np.array([0.1, 0.1])], epsilon=2.0)


def test_flow_check_all_fixtures(delzant):
    for rep in flow_check_all(build_delzant_data(delzant), count=20, seed=1):
        assert rep.passed
        assert all(s.monotone for s in rep.samples)


def test_flow_samples_start_inside():
    D = build_delzant_data(SQUARE)
    samples = draw_flow_samples(D, (-1, -1), 10, random.Random(0), 1.0)
    assert len(samples) == 10
    for z in samples:
        assert z[0] != 0 and z[1] != 0
