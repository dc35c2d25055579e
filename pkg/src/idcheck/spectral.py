"""Dense kernel: local commutators, their extremal eigenphase, norm helpers.

For a cell set A the commutator is built on two registers: the left register
holds the cells of the lightcone of A (ascending), the right register holds
one mirror qubit per cell of A (ascending, labeled ``n + cell``).  The
operator is

    K = W (U_loc (x) I) W (U_loc^dag (x) I),

where W swaps each cell of A with its mirror and U_loc is the localized
circuit.  K is unitary and its spectrum is closed under conjugation, so its
largest eigenphase magnitude theta is arccos of the smallest eigenvalue of
the Hermitian part (K + K^dag) / 2, and ``|K - I| = 2 sin(theta / 2)``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .circuit import Circuit, lightcone, localize
from .errors import ConvergenceError, SizingError

DEFAULT_DENSE_CAP = 14


def dense_cap() -> int:
    """Qubit cap for explicit matrices; override with IDCHECK_DENSE_CAP."""
    raw = os.environ.get("IDCHECK_DENSE_CAP")
    if raw is None:
        return DEFAULT_DENSE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise SizingError(f"IDCHECK_DENSE_CAP={raw!r} is not an integer")
    if cap < 1:
        raise SizingError(f"IDCHECK_DENSE_CAP={cap} must be positive")
    return cap


@dataclass(frozen=True)
class DenseUnitary:
    """Explicit matrix with its qubit labels (axis k of the index maps to
    ``qubits[k]``, most significant first)."""

    qubits: tuple[int, ...]
    matrix: np.ndarray

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def unitarity_residual(self) -> float:
        m = self.matrix
        return float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max())


@dataclass(frozen=True)
class CommutatorSpec:
    """Everything needed to realize the commutator of one cell set."""

    cells: tuple[int, ...]
    cone: frozenset[int]
    local_circuit: Circuit
    qubits: tuple[int, ...]   # left register then mirrors, ascending each

    @property
    def support(self) -> int:
        return len(self.qubits)


def commutator_spec(circuit: Circuit, cells) -> CommutatorSpec:
    cells = tuple(sorted(set(int(c) for c in cells)))
    cone = lightcone(circuit, cells)
    local = localize(circuit, cells)
    n = circuit.n_qubits
    qubits = tuple(sorted(cone)) + tuple(n + c for c in cells)
    return CommutatorSpec(cells, cone, local, qubits)


def _stream_commutator(spec: CommutatorSpec, arr: np.ndarray, n: int) -> np.ndarray:
    """Apply K's four factors (rightmost first) to qubit-axis array ``arr``."""
    axis_of = {q: i for i, q in enumerate(spec.qubits)}
    swaps = [(axis_of[c], axis_of[n + c]) for c in spec.cells]
    arr = _kernel.apply_gates(arr, spec.local_circuit.layers, axis_of, dagger=True)
    for a, b in swaps:
        arr = _kernel.swap_axes_operator(arr, a, b)
    arr = _kernel.apply_gates(arr, spec.local_circuit.layers, axis_of)
    for a, b in swaps:
        arr = _kernel.swap_axes_operator(arr, a, b)
    return arr


def local_unitary(spec: CommutatorSpec) -> np.ndarray:
    """Dense matrix of the localized circuit on its lightcone register."""
    cone = sorted(spec.cone)
    c = len(cone)
    axis_of = {q: i for i, q in enumerate(cone)}
    arr = np.eye(2 ** c, dtype=complex).reshape((2,) * c + (2 ** c,))
    arr = _kernel.apply_gates(arr, spec.local_circuit.layers, axis_of)
    return arr.reshape(2 ** c, 2 ** c)


def _mirror_permuted(m: np.ndarray, spec: CommutatorSpec, n: int) -> np.ndarray:
    """Left-multiply by W (the cell/mirror SWAP product), as a row permutation."""
    s = spec.support
    dim = m.shape[0]
    axis_of = {q: i for i, q in enumerate(spec.qubits)}
    arr = m.reshape((2,) * s + (dim,))
    for c in spec.cells:
        arr = np.swapaxes(arr, axis_of[c], axis_of[n + c])
    return arr.reshape(dim, dim)


def build_commutator(circuit: Circuit, cells, cap: int | None = None) -> DenseUnitary:
    """Explicit commutator matrix for a cell set (usually one cube).

    Gates are streamed onto the lightcone register only; the two mirror-SWAP
    layers are row permutations and the remaining circuit factor is a single
    structured product, so no repeated full-size multiplications occur.
    Raises SizingError when the support (lightcone plus mirror cells) exceeds
    the dense cap.
    """
    spec = commutator_spec(circuit, cells)
    limit = dense_cap() if cap is None else cap
    s = spec.support
    if s > limit:
        raise SizingError(
            f"commutator of cells {spec.cells} needs {s} qubits "
            f"({len(spec.cone)} lightcone + {len(spec.cells)} mirror), "
            f"dense cap is {limit}")
    n = circuit.n_qubits
    u = local_unitary(spec)
    c_dim = u.shape[0]
    mir_dim = 2 ** len(spec.cells)
    dim = c_dim * mir_dim
    m = np.zeros((c_dim, mir_dim, c_dim, mir_dim), dtype=complex)
    idx = np.arange(mir_dim)
    m[:, idx, :, idx] = u.conj().T                      # (U_loc^dag (x) I)
    m = _mirror_permuted(m.reshape(dim, dim), spec, n)  # W ...
    m = (u @ m.reshape(c_dim, -1)).reshape(dim, dim)    # (U_loc (x) I) ...
    m = _mirror_permuted(m, spec, n)                    # W ...
    return DenseUnitary(spec.qubits, m)


def commutator_apply(circuit: Circuit, cells, cap: int | None = None):
    """Matrix-free v -> (K - I) v for the commutator of a cell set.

    Returns (apply, dimension).  The cap for matrix-free work is looser than
    the dense cap since only vectors of the support dimension are stored.
    """
    spec = commutator_spec(circuit, cells)
    limit = (dense_cap() + 8) if cap is None else cap
    s = spec.support
    if s > limit:
        raise SizingError(
            f"matrix-free commutator of cells {spec.cells} needs {s} qubits, "
            f"cap is {limit}")
    dim = 2 ** s
    n = circuit.n_qubits

    def apply(v: np.ndarray) -> np.ndarray:
        w = _stream_commutator(spec, np.asarray(v, dtype=complex).reshape((2,) * s), n)
        return w.reshape(dim) - np.asarray(v).reshape(dim)

    return apply, dim


def hermitian_min_eig(h: np.ndarray, tol: float = 1e-10) -> float:
    """Smallest eigenvalue of a Hermitian matrix (dense symmetric solver)."""
    dev = float(np.abs(h - h.conj().T).max())
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (residual {dev:.3e})")
    try:
        return float(np.linalg.eigvalsh(h)[0])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver failed: {exc}") from exc


_SMALL_ANGLE = 0.1


def _theta_small(m: np.ndarray) -> float:
    # all eigenphases are below pi/2 here, so sin is monotone and the
    # anti-Hermitian part gives the angle with full absolute accuracy
    w = np.linalg.eigvalsh((m - m.conj().T) / 2j)
    peak = max(abs(float(w[0])), abs(float(w[-1])))
    return math.asin(min(1.0, peak))


def theta(k: DenseUnitary | np.ndarray) -> float:
    """Largest eigenphase magnitude of a conjugation-closed unitary, in [0, pi].

    Generically this is arccos of the smallest eigenvalue of the Hermitian
    part (K + K^dag) / 2, clamped so floating-point residue never produces a
    NaN.  Near the identity that arccos loses half the significant digits, so
    small angles are re-extracted from the anti-Hermitian part instead; a
    Frobenius pre-check keeps the near-identity hot path at one eigensolve.
    """
    m = k.matrix if isinstance(k, DenseUnitary) else np.asarray(k)
    fro = float(np.linalg.norm(m - np.eye(m.shape[0])))
    if fro < _SMALL_ANGLE:   # |K - I|_2 <= |K - I|_F, so theta < pi/2 for sure
        return _theta_small(m)
    lam = hermitian_min_eig((m + m.conj().T) / 2, tol=1e-8)
    th = math.acos(min(1.0, max(-1.0, lam)))
    if th < _SMALL_ANGLE:
        return _theta_small(m)
    return th


def comm_norm(angle: float) -> float:
    """Distance |e^{i theta} - 1| from the identity, for theta in [0, pi]."""
    return 2.0 * math.sin(angle / 2.0)


@dataclass(frozen=True)
class PowerMethodResult:
    value: float
    iterations: int
    converged: bool


def power_method_norm(apply, dim: int, eps: float = 1e-2, seed: int = 0,
                      max_iterations: int | None = None) -> PowerMethodResult:
    """Largest singular value of a normal matrix-free operator v -> B v.

    Iterating B on a random Gaussian start and tracking the norm-growth ratio
    is the power method on B^dag B when B is normal (the shifted unitary
    K - I always is).  The ratio sequence is monotone nondecreasing and
    converges to |B| from below; with O(m / eps) iterations the estimate is
    within a factor 1 + eps with high probability over the start vector.
    """
    m = max(1, int(round(math.log2(dim))))
    cap = max_iterations if max_iterations is not None else math.ceil(8 * m / eps) + 32
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    best = 0.0
    hits = 0
    for it in range(1, cap + 1):
        w = apply(v)
        r = float(np.linalg.norm(w))
        if r < 1e-15:
            return PowerMethodResult(0.0, it, True)
        if r - best <= (eps / 8.0) * r:
            hits += 1
            if hits >= 3:
                return PowerMethodResult(r, it, True)
        else:
            hits = 0
        best = max(best, r)
        v = w / r
    return PowerMethodResult(best, cap, False)
