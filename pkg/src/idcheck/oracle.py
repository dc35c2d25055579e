"""Brute-force ground truth on small instances.

The distance of a unitary from the identity is a function of its eigenvalue
set on the unit circle: if the convex hull of the eigenvalues misses the
origin the diamond-norm distance is the largest pairwise chord, otherwise it
is 2; the operator-norm distance is the largest chord to the point 1.
Eigenphases are extracted without a general non-symmetric eigensolver by
jointly diagonalizing the Hermitian and anti-Hermitian parts (the matrix is
normal, so they commute): eigenvectors of the Hermitian part are grouped
into degenerate clusters and the anti-Hermitian part is rediagonalized
inside each cluster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .circuit import Circuit
from .errors import SizingError
from .spectral import DenseUnitary, dense_cap

PHASE_COLLAPSE_TOL = 1e-10


@dataclass(frozen=True)
class PhaseSet:
    """Sorted distinct eigenphases in (-pi, pi], multiplicity collapsed."""

    phases: tuple[float, ...]

    def __post_init__(self):
        if not self.phases:
            raise ValueError("a unitary has at least one eigenphase")


def collapse_phases(raw, tol: float = PHASE_COLLAPSE_TOL) -> PhaseSet:
    vals = []
    for p in raw:
        p = float(p)
        if p <= -math.pi + tol:   # keep the branch cut convention (-pi, pi]
            p += 2 * math.pi
        vals.append(p)
    vals.sort()
    out = [vals[0]]
    for p in vals[1:]:
        if p - out[-1] > tol:
            out.append(p)
    # the circle wraps: merge duplicates straddling the cut
    if len(out) > 1 and (out[0] + math.pi) + (math.pi - out[-1]) <= tol:
        out.pop()
    return PhaseSet(tuple(out))


def full_unitary(circuit: Circuit, cap: int | None = None) -> DenseUnitary:
    """Explicit matrix of the whole circuit by gate streaming."""
    n = circuit.n_qubits
    limit = dense_cap() if cap is None else cap
    if n > limit:
        raise SizingError(f"circuit acts on {n} qubits, dense cap is {limit}")
    dim = 2 ** n
    arr = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    axis_of = {q: q for q in range(n)}
    arr = _kernel.apply_gates(arr, circuit.layers, axis_of)
    return DenseUnitary(tuple(range(n)), arr.reshape(dim, dim))


def normal_eigphases(m: np.ndarray, cluster_tol: float = 1e-8) -> np.ndarray:
    """All eigenphases (with multiplicity) of a unitary, via the commuting
    Hermitian pair.

    cos-values come from the Hermitian part; within each (nearly) degenerate
    cos cluster the anti-Hermitian part is diagonalized to split the +phi and
    -phi branches, then phases are assembled with atan2.  This avoids a
    general non-symmetric eigensolver and stays accurate near phase 0 and pi.
    """
    m = np.asarray(m, dtype=complex)
    h = (m + m.conj().T) / 2
    s = (m - m.conj().T) / 2j
    w, v = np.linalg.eigh(h)
    phases = np.empty(len(w))
    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and w[stop] - w[stop - 1] <= cluster_tol:
            stop += 1
        block = v[:, start:stop]
        if stop - start == 1:
            sin_vals = np.array([np.real(block[:, 0].conj() @ (s @ block[:, 0]))])
        else:
            sb = block.conj().T @ s @ block
            sin_vals, rot = np.linalg.eigh((sb + sb.conj().T) / 2)
            block = block @ rot
        cos_vals = np.real(np.einsum("ij,ij->j", block.conj(), h @ block))
        phases[start:stop] = np.arctan2(sin_vals, cos_vals)
        start = stop
    return phases


def eig_phases(u: DenseUnitary | np.ndarray, cluster_tol: float = 1e-8) -> PhaseSet:
    """Distinct eigenphases of a unitary, multiplicity collapsed."""
    m = u.matrix if isinstance(u, DenseUnitary) else np.asarray(u, dtype=complex)
    return collapse_phases(normal_eigphases(m, cluster_tol))


def exact_diamond(phases: PhaseSet) -> float:
    """Exact diamond-norm distance to the identity from the eigenphases.

    The origin lies in the hull of unit-circle points iff no circular gap
    between consecutive sorted phases exceeds pi (a gap of exactly pi counts
    as containing).  Outside that case the points sit on an arc shorter than
    pi and the maximal chord is the one across the arc, 2 sin(gap / 2).
    """
    ps = phases.phases
    if len(ps) == 1:
        return 0.0
    gaps = [b - a for a, b in zip(ps, ps[1:])]
    gaps.append(2 * math.pi - (ps[-1] - ps[0]))
    g = max(gaps)
    if g <= math.pi:
        return 2.0
    return 2.0 * math.sin(g / 2.0)


def exact_opnorm(phases: PhaseSet) -> float:
    """Largest singular value of U - I: the largest chord to the point 1."""
    return max(2.0 * math.sin(abs(p) / 2.0) for p in phases.phases)


def circuit_distances(circuit: Circuit, cap: int | None = None):
    """(diamond, opnorm, phase count) for a small circuit, by brute force."""
    ps = eig_phases(full_unitary(circuit, cap))
    return exact_diamond(ps), exact_opnorm(ps), len(ps.phases)
