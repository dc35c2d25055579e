"""Shared random-instance generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from idcheck import ArrayShape, Gate, make_circuit, named_gate, reclusive_partition
from idcheck.checker import validate_partition
from idcheck.errors import SeparationError
from idcheck.spectral import commutator_spec


def random_unitary_near_identity(rng, arity, eps):
    """exp(-i eps G) for a random Hermitian G with unit spectral norm."""
    dim = 2 ** arity
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    g = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(g)
    w = w / max(abs(w[0]), abs(w[-1]))
    return (v * np.exp(-1j * eps * w)) @ v.conj().T


def random_1d_circuit(rng, n, depth, eps, p_two=0.45, p_one=0.2):
    """Random nearest-neighbor chain circuit with exp(-i eps G) gates."""
    shape = ArrayShape((n,))
    layers = []
    for _ in range(depth):
        layer, used = [], set()
        order = rng.permutation(n - 1) if n > 1 else []
        for b in order:
            if b in used or b + 1 in used or rng.random() > p_two:
                continue
            layer.append(Gate((b, b + 1),
                              random_unitary_near_identity(rng, 2, eps)))
            used.update((b, b + 1))
        for q in range(n):
            if q not in used and rng.random() < p_one:
                layer.append(Gate((q,),
                                  random_unitary_near_identity(rng, 1, eps)))
                used.add(q)
        layers.append(layer)
    return make_circuit(shape, layers)


def random_2d_circuit(rng, dims, depth, eps, p_two=0.4, p_one=0.15):
    shape = ArrayShape(tuple(dims))
    bonds = []
    for i, coord in shape.cells():
        for axis in range(shape.ndim):
            nb = list(coord)
            nb[axis] += 1
            if nb[axis] < shape.dims[axis]:
                bonds.append((i, shape.index_of(nb)))
    layers = []
    for _ in range(depth):
        layer, used = [], set()
        for bi in rng.permutation(len(bonds)):
            a, b = bonds[bi]
            if a in used or b in used or rng.random() > p_two:
                continue
            layer.append(Gate((a, b), random_unitary_near_identity(rng, 2, eps)))
            used.update((a, b))
        for q in range(shape.n_cells):
            if q not in used and rng.random() < p_one:
                layer.append(Gate((q,), random_unitary_near_identity(rng, 1, eps)))
                used.add(q)
        layers.append(layer)
    return make_circuit(shape, layers)


def hamming_preserving_circuit(rng, n, depth, eps):
    """Random chain circuit whose gates all fix the all-zeros state."""
    shape = ArrayShape((n,))
    layers = []
    for _ in range(depth):
        layer, used = [], set()
        for b in rng.permutation(max(n - 1, 0)):
            if b in used or b + 1 in used or rng.random() > 0.5:
                continue
            name = rng.choice(["XXplusYY", "CZ"])
            gate = (named_gate("CZ", (b, b + 1)) if name == "CZ"
                    else named_gate("XXplusYY", (b, b + 1),
                                    (eps * rng.standard_normal(),)))
            layer.append(gate)
            used.update((b, b + 1))
        for q in range(n):
            if q not in used and rng.random() < 0.3:
                layer.append(named_gate("RZ", (q,), (eps * rng.standard_normal(),)))
        layers.append(layer)
    return make_circuit(shape, layers)


def feasible_partition(circuit, support_cap, sizes=None):
    """Smallest-cube partition that validates and fits the cap, or None."""
    d = circuit.shape.ndim
    if sizes is None:
        sizes = [d * k for k in (1, 2, 3, 4, 6)]
    for size in sizes:
        part = reclusive_partition(circuit.shape, size)
        try:
            validate_partition(circuit, part)
        except SeparationError:
            continue
        supports = [commutator_spec(circuit, cube.cells).support
                    for cube in part.all_cubes()]
        if max(supports) <= support_cap:
            return part
    return None


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
