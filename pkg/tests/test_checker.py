"""Checker: the cube sweep, its guarantees, polygon points, layered bound."""

import math

import numpy as np
import pytest

from idcheck import (ArrayShape, algorithm1, build_commutator, check_circuit,
                     circuit_distances, full_unitary, general_estimate,
                     layered_bound, make_circuit, named_gate, opnorm_estimate,
                     polygon_point_product_1d, polygon_point_zero,
                     reclusive_partition, theta)
from idcheck.checker import PolygonPoint, validate_partition
from idcheck.errors import InapplicabilityError, SeparationError
from idcheck.xy_benchmark import XYInstance, build_trotter_pair

from conftest import feasible_partition, hamming_preserving_circuit, random_1d_circuit


def test_identity_circuit_gives_zero():
    shape = ArrayShape((8,))
    c = make_circuit(shape, [])
    rep = algorithm1(c, reclusive_partition(shape, 2))
    assert rep.gamma == 0.0 and not rep.early_exit
    assert all(th == 0.0 for s in rep.per_color for th in s.thetas)


def test_single_rotation_gamma_equals_exact_distance():
    for phi in (0.2, 0.6, 1.0):   # |phi| <= pi/3 keeps delta below 2
        shape = ArrayShape((4,))
        c = make_circuit(shape, [[named_gate("RZ", (1,), (phi,))]])
        rep = algorithm1(c, reclusive_partition(shape, 2))
        d, _, _ = circuit_distances(c)
        assert abs(rep.gamma - abs(np.exp(1j * phi) - 1)) < 1e-12
        assert abs(rep.gamma - d) < 1e-12


def test_x_layer_early_exit_and_oracle_agrees():
    shape = ArrayShape((6,))
    c = make_circuit(shape, [[named_gate("X", (q,)) for q in range(6)]])
    rep = algorithm1(c, reclusive_partition(shape, 2))
    assert rep.early_exit and rep.gamma == 2.0
    assert circuit_distances(c)[0] == 2.0
    assert rep.bounds.diamond_lower == pytest.approx(math.sqrt(2))


def test_xy_benchmark_small_chain_sandwich():
    from idcheck.xy_benchmark import free_fermion_delta
    inst = XYInstance(6, 0.01)
    u = build_trotter_pair(inst)[2]
    d, _ = free_fermion_delta(inst)
    # at this length each color class holds a single cube, so cube size 4
    # validates and the certified sandwich must hold exactly
    rep = algorithm1(u, reclusive_partition(u.shape, 4))
    assert d - 1e-9 <= rep.gamma <= 2 * d + 1e-9


def test_l4_partition_rejected_for_deep_xy_chain():
    u = build_trotter_pair(XYInstance(12, 0.01))[2]
    part = reclusive_partition(u.shape, 4)
    with pytest.raises(SeparationError) as err:
        algorithm1(u, part)
    assert err.value.color == 1
    assert err.value.cube_a.anchor == (0,)
    assert err.value.cube_b.anchor == (8,)


def test_reports_are_deterministic(rng):
    c = random_1d_circuit(rng, 8, 2, 0.3)
    part = feasible_partition(c, 12)
    assert part is not None
    reps = [algorithm1(c, part, jobs=j) for j in (1, 1, 2)]
    assert reps[0].to_dict()["gamma"] == reps[1].to_dict()["gamma"]
    assert reps[0].gamma == reps[2].gamma
    assert [s.thetas for s in reps[0].per_color] == \
           [s.thetas for s in reps[2].per_color]


def test_memoization_changes_nothing():
    # translation-invariant circuit whose cubes repeat their local structure
    n = 12
    shape = ArrayShape((n,))
    layers = [[named_gate("XXplusYY", (b, b + 1), (0.07,))
               for b in range(0, n - 1, 2)],
              [named_gate("RZ", (q,), (0.11,)) for q in range(n)]]
    c = make_circuit(shape, layers)
    part = reclusive_partition(shape, 2)
    from idcheck.checker import _fingerprint
    from idcheck.spectral import commutator_spec
    cls = part.classes[0]
    assert _fingerprint(commutator_spec(c, cls[0].cells)) == \
           _fingerprint(commutator_spec(c, cls[1].cells))
    a = algorithm1(c, part, memoize=True)
    b = algorithm1(c, part, memoize=False)
    assert a.gamma == b.gamma
    assert [s.thetas for s in a.per_color] == [s.thetas for s in b.per_color]


def test_general_estimate_values():
    shape = ArrayShape((4,))
    c = make_circuit(shape, [])
    rep = algorithm1(c, reclusive_partition(shape, 2))
    assert general_estimate(rep) == 0.0
    c2 = make_circuit(shape, [[named_gate("X", (q,)) for q in range(4)]])
    rep2 = algorithm1(c2, reclusive_partition(shape, 2))
    assert rep2.early_exit and general_estimate(rep2) == 2.0
    assert abs(min(2.0, 1.16 * 1.0) - 1.16) < 1e-15


def test_general_estimate_sandwich_property(rng):
    done = 0
    while done < 20:
        n = int(rng.integers(2, 8))
        c = random_1d_circuit(rng, n, 2, float(rng.uniform(0.1, 3.0)))
        part = feasible_partition(c, 11)
        if part is None:
            continue
        rep = algorithm1(c, part)
        d, _, _ = circuit_distances(c)
        est = general_estimate(rep)
        assert d <= est + 1e-9
        assert est <= min(2.0, 1.16 * 2 * d + 1e-9)
        done += 1


def test_opnorm_estimate_covers_xy_benchmark():
    from idcheck.xy_benchmark import free_fermion_delta
    inst = XYInstance(6, 0.01)
    u = build_trotter_pair(inst)[2]
    _, op_exact = free_fermion_delta(inst)
    rep = algorithm1(u, reclusive_partition(u.shape, 4))
    states = [np.array([1.0, 0.0])] * 6
    point = polygon_point_product_1d(u, states)
    est = opnorm_estimate(rep.gamma, point)
    assert est >= op_exact - 1e-9


def test_additivity_of_theta_over_separated_cubes(rng):
    hits = 0
    while hits < 8:
        n = int(rng.integers(8, 11))
        c = random_1d_circuit(rng, n, 2, 0.05)
        a = (0, 1)
        b = (n - 2, n - 1)
        from idcheck import lightcone_separated
        if not lightcone_separated(c, a, b):
            continue
        ta = theta(build_commutator(c, a))
        tb = theta(build_commutator(c, b))
        if ta + tb >= math.pi / 2 - 1e-6:
            continue
        tu = theta(build_commutator(c, a + b))
        assert abs(tu - (ta + tb)) < 1e-9
        hits += 1


def test_polygon_point_zero_identity_and_offender():
    c = make_circuit(ArrayShape((3,)), [])
    assert polygon_point_zero(c).t == 1.0
    ch = make_circuit(ArrayShape((3,)), [[named_gate("H", (0,))]])
    with pytest.raises(InapplicabilityError):
        polygon_point_zero(ch)


def test_polygon_point_zero_on_hamming_preserving_circuit(rng):
    c = hamming_preserving_circuit(rng, 6, 3, 0.4)
    t = polygon_point_zero(c).t
    amp = full_unitary(c).matrix[0, 0]
    assert abs(t - amp) < 1e-12


def test_polygon_point_zero_rejects_xy_benchmark():
    u = build_trotter_pair(XYInstance(6, 0.05))[2]
    with pytest.raises(InapplicabilityError):
        polygon_point_zero(u)


def test_product_point_identity_and_rz():
    c = make_circuit(ArrayShape((3,)), [])
    states = [np.array([1.0, 0.0])] * 3
    assert polygon_point_product_1d(c, states).t == 1.0
    phi = 0.44
    c2 = make_circuit(ArrayShape((3,)), [[named_gate("RZ", (1,), (phi,))]])
    t = polygon_point_product_1d(c2, states).t
    assert abs(t - np.exp(-1j * phi / 2)) < 1e-14


def test_product_point_matches_dense_amplitude(rng):
    for _ in range(4):
        n = 10
        c = random_1d_circuit(rng, n, 2, 0.8)
        states = []
        for _ in range(n):
            v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            states.append(v / np.linalg.norm(v))
        t = polygon_point_product_1d(c, states).t
        psi = np.array([1.0 + 0j])
        for v in states:
            psi = np.kron(psi, v)
        u = full_unitary(c).matrix
        assert abs(t - np.vdot(psi, u @ psi)) < 1e-12


def test_product_point_requires_1d():
    c = make_circuit(ArrayShape((2, 2)), [])
    with pytest.raises(InapplicabilityError):
        polygon_point_product_1d(c, [np.array([1.0, 0.0])] * 4)


def test_opnorm_estimate_identity_and_global_phase(rng):
    c = make_circuit(ArrayShape((2,)), [])
    rep = algorithm1(c, reclusive_partition(c.shape, 2))
    pt = polygon_point_zero(c)
    assert opnorm_estimate(rep.gamma, pt) == 0.0
    # same rotation on every qubit: tiny gamma, the phase sits in |t - 1|
    phi = 0.3
    c2 = make_circuit(ArrayShape((2,)),
                      [[named_gate("RZ", (0,), (phi,)),
                        named_gate("RZ", (1,), (phi,))]])
    rep2 = algorithm1(c2, reclusive_partition(c2.shape, 2))
    pt2 = polygon_point_zero(c2)
    est = opnorm_estimate(rep2.gamma, pt2)
    _, op, _ = circuit_distances(c2)
    assert op - 1e-12 <= est <= 5 * op + 1e-12


def test_opnorm_estimate_user_point():
    pt = PolygonPoint(complex(0.8, 0.1), "user-supplied")
    assert abs(opnorm_estimate(0.5, pt) - (0.5 + abs(0.8 + 0.1j - 1))) < 1e-15


def test_layered_bound_trivial_and_single_chunk(rng):
    c = make_circuit(ArrayShape((6,)), [])
    assert layered_bound(c, 2) == 0.0
    c2 = random_1d_circuit(rng, 6, 2, 0.05)
    assert abs(layered_bound(c2, 2) - check_circuit(c2).gamma) < 1e-15


def test_layered_bound_on_deep_chain(rng):
    # depth-8 chain: single-shot needs one all-covering cube; chunks stay local
    n = 6
    c = random_1d_circuit(rng, n, 8, 0.02, p_two=0.8)
    chunked = layered_bound(c, 2)
    single = check_circuit(c).gamma
    d, _, _ = circuit_distances(c)
    assert chunked >= single - 1e-12
    assert single >= d - 1e-9
    assert chunked >= d - 1e-9


def test_validate_partition_passes_matching_configuration():
    u = build_trotter_pair(XYInstance(8, 0.01))[2]
    validate_partition(u, reclusive_partition(u.shape, 4))
