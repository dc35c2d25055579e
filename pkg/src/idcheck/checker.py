"""Certified identity-check estimators for shallow local circuits.

The main entry point runs the per-cube commutator sweep over a reclusive
partition: for each color class it accumulates the extremal eigenphases of
the cube commutators into an angle phi_j, exits early with gamma = 2 as soon
as any running phi_j reaches pi / 2, and otherwise returns

    gamma = sum_j |e^{i phi_j} - 1|.

When the circuit's distance to the identity is below 2 this estimate is
sandwiched between the true diamond-norm distance and (D + 1) times it; in
general 1.16 * gamma keeps the upper-bound role at ratio 1.16 (D + 1).
Soundness of the per-cube accumulation requires every same-color cube pair
to be lightcone separated for the actual circuit, which is validated up
front and rejected otherwise.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import spectral
from .circuit import Circuit, lightcone
from .errors import (ConvergenceError, InapplicabilityError, SeparationError,
                     SizingError, ValidationError)
from .lattice import ReclusivePartition, reclusive_partition

EARLY_EXIT_TOL = 1e-12
GENERAL_FACTOR = 1.16   # >= 2 / sqrt(3), the general-case rescaling
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ColorSummary:
    color: int
    phi: float
    cube_count: int
    thetas: tuple[float, ...]


@dataclass(frozen=True)
class Bounds:
    diamond_upper: float
    diamond_lower: float
    general_upper: float


@dataclass(frozen=True)
class CheckReport:
    gamma: float
    per_color: tuple[ColorSummary, ...]
    early_exit: bool
    bounds: Bounds
    ndim: int
    cube_total: int
    max_support: int
    mode: str
    wall_ms: float

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "early_exit": self.early_exit,
            "per_color": [
                {"color": c.color, "phi": c.phi, "cube_count": c.cube_count,
                 "thetas": list(c.thetas)}
                for c in self.per_color
            ],
            "bounds": {
                "diamond_upper": self.bounds.diamond_upper,
                "diamond_lower": self.bounds.diamond_lower,
                "general_upper": self.bounds.general_upper,
            },
            "ndim": self.ndim,
            "cube_total": self.cube_total,
            "max_support": self.max_support,
            "mode": self.mode,
            "wall_ms": self.wall_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def summary(self) -> str:
        return (f"gamma={self.gamma:.12g} early_exit={self.early_exit} "
                f"bounds=[{self.bounds.diamond_lower:.12g}, "
                f"{self.bounds.diamond_upper:.12g}] "
                f"general={self.bounds.general_upper:.12g} "
                f"(D={self.ndim}, cubes={self.cube_total}, "
                f"max_support={self.max_support}qb, {self.wall_ms:.1f} ms)")


def validate_partition(circuit: Circuit, partition: ReclusivePartition) -> None:
    """Reject partitions whose same-color cubes are not lightcone separated.

    One sweep per color over all lightcone cells (linear in the array size);
    the first colliding pair is reported.
    """
    for color_idx, cls in enumerate(partition.classes, start=1):
        owner: dict[int, int] = {}
        for ci, cube in enumerate(cls):
            for cell in lightcone(circuit, cube.cells):
                prev = owner.get(cell)
                if prev is not None and prev != ci:
                    raise SeparationError(
                        color_idx, cls[prev], cube,
                        f"their lightcones share cell {cell}")
                owner[cell] = ci


def _fingerprint(spec: spectral.CommutatorSpec) -> tuple:
    cells = set(spec.cells) | set(spec.cone)
    base = min(cells)
    gates = []
    for li, layer in enumerate(spec.local_circuit.layers):
        for g in layer:
            gates.append((li, tuple(q - base for q in g.qubits),
                          g.matrix.tobytes()))
    return (tuple(c - base for c in spec.cells),
            tuple(sorted(q - base for q in spec.cone)),
            tuple(gates))


def cube_theta(circuit: Circuit, cells, mode: str = "dense",
               power_eps: float = 1e-3, seed: int = 0,
               cap: int | None = None) -> tuple[float, int]:
    """(theta, support size) of one cell set's commutator."""
    if mode == "dense":
        k = spectral.build_commutator(circuit, cells, cap)
        return spectral.theta(k), k.n_qubits
    if mode == "power":
        apply, dim = spectral.commutator_apply(circuit, cells, cap)
        res = spectral.power_method_norm(apply, dim, eps=power_eps, seed=seed)
        if not res.converged:
            raise ConvergenceError(
                f"power method did not converge for cells {tuple(cells)} "
                f"after {res.iterations} iterations (best {res.value:.3e})")
        half = min(1.0, max(0.0, res.value / 2.0))
        return 2.0 * math.asin(half), int(round(math.log2(dim)))
    raise ValidationError(f"unknown mode {mode!r}")


def algorithm1(circuit: Circuit, partition: ReclusivePartition, *,
               mode: str = "dense", power_eps: float = 1e-3, seed: int = 0,
               jobs: int = 1, assume_delta_lt2: bool = False,
               memoize: bool = True, cap: int | None = None) -> CheckReport:
    """Run the per-cube sweep and assemble the certified report.

    Per-cube angles are reduced in fixed color-then-cube order regardless of
    the worker count, so identical inputs produce bit-identical reports.
    ``assume_delta_lt2`` switches the reported lower bound to gamma / (D + 1),
    which is only justified when the caller knows the distance is below 2.
    """
    t0 = time.perf_counter()
    validate_partition(circuit, partition)
    ndim = partition.ndim
    memo: dict[tuple, tuple[float, int]] = {}

    def theta_of(cube) -> tuple[float, int]:
        if not memoize:
            return cube_theta(circuit, cube.cells, mode, power_eps, seed, cap)
        key = _fingerprint(spectral.commutator_spec(circuit, cube.cells))
        if key not in memo:
            memo[key] = cube_theta(circuit, cube.cells, mode, power_eps, seed, cap)
        return memo[key]

    per_color: list[ColorSummary] = []
    max_support = 0
    cube_total = sum(len(cls) for cls in partition.classes)
    early_exit = False
    gamma = 0.0
    for color_idx, cls in enumerate(partition.classes, start=1):
        if jobs > 1 and len(cls) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(theta_of, cls))
        else:
            results = None
        phi = 0.0
        consumed: list[float] = []
        for ci, cube in enumerate(cls):
            th, support = results[ci] if results is not None else theta_of(cube)
            max_support = max(max_support, support)
            phi += th
            consumed.append(th)
            if phi >= math.pi / 2 - EARLY_EXIT_TOL:
                early_exit = True
                break
        per_color.append(ColorSummary(color_idx, phi, len(cls), tuple(consumed)))
        if early_exit:
            break
        gamma += 2.0 * math.sin(phi / 2.0)

    if early_exit:
        gamma = 2.0
    general_upper = min(2.0, GENERAL_FACTOR * gamma)
    if not early_exit and assume_delta_lt2:
        lower = gamma / (ndim + 1)
    else:
        lower = max(gamma / (GENERAL_FACTOR * (ndim + 1)),
                    SQRT2 if early_exit else 0.0)
    bounds = Bounds(diamond_upper=gamma, diamond_lower=lower,
                    general_upper=general_upper)
    wall_ms = (time.perf_counter() - t0) * 1e3
    return CheckReport(gamma, tuple(per_color), early_exit, bounds, ndim,
                       cube_total, max_support, mode, wall_ms)


def general_estimate(report: CheckReport) -> float:
    """Distance estimate valid without any closeness assumption, capped at 2."""
    return min(2.0, GENERAL_FACTOR * report.gamma)


def check_circuit(circuit: Circuit, size: int | None = None,
                  **algo_kwargs) -> CheckReport:
    """Partition with the given (or default worst-case) cube size and run."""
    if size is None:
        size = max(1, 2 * circuit.shape.ndim * circuit.depth)
        if size % circuit.shape.ndim:
            size += circuit.shape.ndim - size % circuit.shape.ndim
    partition = reclusive_partition(circuit.shape, size)
    return algorithm1(circuit, partition, **algo_kwargs)


# ---------------------------------------------------------------------------
# Operator-norm reduction: any point of the eigenvalue polygon suffices.

@dataclass(frozen=True)
class PolygonPoint:
    t: complex
    provenance: str   # zero-state | product-state | user-supplied


def polygon_point_zero(circuit: Circuit) -> PolygonPoint:
    """Amplitude of the all-zeros state, valid when every gate fixes it.

    Checks gate by gate that the first matrix column is a phase times the
    first basis vector; the amplitude is then the product of those phases.
    """
    t = complex(1.0)
    for li, layer in enumerate(circuit.layers):
        for gi, gate in enumerate(layer):
            col = gate.matrix[:, 0]
            if np.abs(col[1:]).max(initial=0.0) > 1e-10:
                raise InapplicabilityError(
                    f"gate {gi} in layer {li} does not fix the all-zeros "
                    "state; use the product-state amplitude instead")
            t *= col[0]
    return PolygonPoint(t, "zero-state")


def polygon_point_product_1d(circuit: Circuit, states) -> PolygonPoint:
    """Exact product-state expectation value of a 1D circuit.

    Contracts left to right keeping only a live window of open qubits, so
    the cost is linear in the chain length and exponential only in the
    lightcone width.  ``states`` holds one normalized 2-vector per qubit.
    """
    if circuit.shape.ndim != 1:
        raise InapplicabilityError("product-state amplitudes are only "
                                   "supported for 1D arrays")
    n = circuit.n_qubits
    kets = []
    for q in range(n):
        v = np.asarray(states[q], dtype=complex).reshape(2)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > 1e-8:
            raise ValidationError(f"state for qubit {q} is not normalized")
        kets.append(v / norm)

    gates = [(li, gi, g) for li, layer in enumerate(circuit.layers)
             for gi, g in enumerate(layer)]
    queue: dict[int, list[int]] = {q: [] for q in range(n)}
    for idx, (_, _, g) in enumerate(gates):
        for q in g.qubits:
            queue[q].append(idx)
    head = {q: 0 for q in range(n)}
    applied = [False] * len(gates)
    cap = spectral.dense_cap()

    arr = np.ones((), dtype=complex)
    axis: dict[int, int] = {}
    next_open = 0
    closed = 0
    while closed < n:
        progressed = False
        for idx, (_, _, g) in enumerate(gates):
            if applied[idx] or not all(q in axis for q in g.qubits):
                continue
            if all(queue[q][head[q]] == idx for q in g.qubits):
                arr = np.tensordot(g.matrix.reshape((2,) * (2 * g.arity)), arr,
                                   axes=(tuple(range(g.arity, 2 * g.arity)),
                                         tuple(axis[q] for q in g.qubits)))
                arr = np.moveaxis(arr, range(g.arity),
                                  [axis[q] for q in g.qubits])
                applied[idx] = True
                for q in g.qubits:
                    head[q] += 1
                progressed = True
        closable = [q for q in axis if head[q] == len(queue[q])]
        if closable:
            q = min(closable)
            a = axis.pop(q)
            arr = np.tensordot(kets[q].conj(), arr, axes=([0], [a]))
            for other in axis:
                if axis[other] > a:
                    axis[other] -= 1
            closed += 1
            continue
        if next_open < n:
            if len(axis) + 1 > cap:
                raise SizingError(
                    f"contraction window would exceed {cap} qubits; "
                    "the circuit is too deep for this method")
            arr = np.multiply.outer(arr, kets[next_open])
            axis[next_open] = arr.ndim - 1
            next_open += 1
            continue
        if not progressed:
            raise RuntimeError("contraction stalled; circuit layering broken")
    return PolygonPoint(complex(arr), "product-state")


def opnorm_estimate(gamma: float, point: PolygonPoint) -> float:
    """Upper estimate of |U - I| from a diamond-norm estimate and any
    eigenvalue-polygon point; ratio 1 + 2 alpha carries over."""
    return gamma + abs(point.t - 1.0)


def layered_bound(circuit: Circuit, chunk_depth: int, size: int | None = None,
                  **algo_kwargs) -> float:
    """Divide and conquer for deep circuits: split into consecutive chunks of
    at most ``chunk_depth`` layers and add the per-chunk estimates.  Valid as
    an upper bound by the triangle inequality, with no ratio guarantee."""
    if chunk_depth < 1:
        raise ValidationError("chunk depth must be at least 1")
    total = 0.0
    for start in range(0, circuit.depth, chunk_depth):
        layers = circuit.layers[start:start + chunk_depth]
        if not any(layers):
            continue
        chunk = Circuit(circuit.shape, layers)
        report = check_circuit(chunk, size, **algo_kwargs)
        total += report.gamma
    return total
