"""Circuit data model: gates, layers, lightcones, localization, JSON format.

Conventions (normative for file interchange):

* Gate matrices act on the listed qubits with the first listed qubit as the
  most significant bit of the matrix index.
* ``RZ(t) = diag(exp(-i t / 2), exp(+i t / 2))``; ``RX`` and ``RY`` are the
  analogous half-angle rotations.
* ``XX(t) = exp(-i t X (x) X)``, ``YY(t) = exp(-i t Y (x) Y)``,
  ``XXplusYY(t) = exp(-i t (X (x) X + Y (x) Y))`` (full angle, no half).
* Complex numbers are serialized as ``[re, im]`` pairs of IEEE doubles.

Two-qubit gates must act on nearest-neighbor cells of the array (coordinates
differing by one step along a single axis) and gates within a layer must be
disjoint.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CircuitFormatError
from .lattice import ArrayShape

UNITARITY_TOL = 1e-10

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _rot(pauli: np.ndarray, theta: float) -> np.ndarray:
    return math.cos(theta / 2) * np.eye(2) - 1j * math.sin(theta / 2) * pauli


def _two_body_exp(h: np.ndarray, tau: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * tau * w)) @ v.conj().T


_FIXED = {
    "X": _X,
    "Y": _Y,
    "Z": _Z,
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "T": np.diag([1, cmath.exp(1j * math.pi / 4)]),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                   dtype=complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                     dtype=complex),
}

_PARAMETRIC = {
    "RX": lambda t: _rot(_X, t),
    "RY": lambda t: _rot(_Y, t),
    "RZ": lambda t: np.diag([cmath.exp(-1j * t / 2), cmath.exp(1j * t / 2)]),
    "XX": lambda t: _two_body_exp(np.kron(_X, _X), t),
    "YY": lambda t: _two_body_exp(np.kron(_Y, _Y), t),
    "XXplusYY": lambda t: _two_body_exp(np.kron(_X, _X) + np.kron(_Y, _Y), t),
}


def gate_matrix(name: str, params=()) -> np.ndarray:
    """Explicit matrix of a named gate under the documented conventions."""
    if name in _FIXED:
        if params:
            raise CircuitFormatError("schema", f"gate {name} takes no parameters")
        return _FIXED[name].copy()
    if name in _PARAMETRIC:
        if len(params) != 1:
            raise CircuitFormatError("schema", f"gate {name} takes one parameter")
        return _PARAMETRIC[name](float(params[0]))
    raise CircuitFormatError("schema", f"unknown gate name {name!r}")


@dataclass(frozen=True)
class Gate:
    qubits: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)
    name: str | None = None
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def dagger(self) -> "Gate":
        params = tuple(-p for p in self.params) if self.name in _PARAMETRIC else ()
        name = self.name if self.name in _PARAMETRIC else None
        return Gate(self.qubits, self.matrix.conj().T, name, params)


def named_gate(name: str, qubits, params=()) -> Gate:
    return Gate(tuple(qubits), gate_matrix(name, params), name,
                tuple(float(p) for p in params))


@dataclass(frozen=True)
class Circuit:
    """Layered circuit on a rectangular qubit array; immutable after build."""

    shape: ArrayShape
    layers: tuple[tuple[Gate, ...], ...]

    @property
    def n_qubits(self) -> int:
        return self.shape.n_cells

    @property
    def depth(self) -> int:
        return len(self.layers)

    def gate_count(self) -> int:
        return sum(len(layer) for layer in self.layers)


def _check_gate(shape: ArrayShape, gate: Gate, layer_idx: int, gate_idx: int):
    n = shape.n_cells
    if gate.arity not in (1, 2):
        raise CircuitFormatError("schema", "gates act on 1 or 2 qubits",
                                 layer_idx, gate_idx)
    if len(set(gate.qubits)) != gate.arity:
        raise CircuitFormatError("schema", "repeated qubit in gate",
                                 layer_idx, gate_idx)
    for q in gate.qubits:
        if not 0 <= q < n:
            raise CircuitFormatError("schema", f"qubit {q} outside array",
                                     layer_idx, gate_idx)
    dim = 2 ** gate.arity
    if gate.matrix.shape != (dim, dim):
        raise CircuitFormatError("schema", f"matrix shape {gate.matrix.shape} "
                                 f"does not match {gate.arity} qubits",
                                 layer_idx, gate_idx)
    dev = np.abs(gate.matrix.conj().T @ gate.matrix - np.eye(dim)).max()
    if dev > UNITARITY_TOL:
        raise CircuitFormatError("non-unitary",
                                 f"max deviation from unitarity {dev:.3e}",
                                 layer_idx, gate_idx)
    if gate.arity == 2 and not shape.are_neighbors(*gate.qubits):
        raise CircuitFormatError("non-neighbor",
                                 f"qubits {gate.qubits} are not nearest neighbors",
                                 layer_idx, gate_idx)


def make_circuit(shape: ArrayShape, layers) -> Circuit:
    """Validate and freeze a circuit built in memory."""
    frozen = []
    for li, layer in enumerate(layers):
        used: set[int] = set()
        row = []
        for gi, gate in enumerate(layer):
            _check_gate(shape, gate, li, gi)
            if used & set(gate.qubits):
                raise CircuitFormatError("overlap",
                                         f"qubits {gate.qubits} already used in layer",
                                         li, gi)
            used.update(gate.qubits)
            row.append(gate)
        frozen.append(tuple(row))
    return Circuit(shape, tuple(frozen))


# ---------------------------------------------------------------------------
# JSON interchange

def parse_circuit(document: str) -> Circuit:
    """Parse and validate the JSON circuit format.

    Raises CircuitFormatError with codes ``schema``, ``non-unitary``,
    ``non-neighbor`` or ``overlap``; the offending layer/gate index is
    included where it exists.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError("schema", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "dims" not in doc or "layers" not in doc:
        raise CircuitFormatError("schema", "document must have 'dims' and 'layers'")
    dims = doc["dims"]
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and d > 0 for d in dims)):
        raise CircuitFormatError("schema", "'dims' must be positive integers")
    shape = ArrayShape(tuple(dims))
    if not isinstance(doc["layers"], list):
        raise CircuitFormatError("schema", "'layers' must be a list")
    layers = []
    for li, layer in enumerate(doc["layers"]):
        if not isinstance(layer, list):
            raise CircuitFormatError("schema", "layer must be a list", li)
        row = []
        for gi, spec in enumerate(layer):
            row.append(_parse_gate(spec, li, gi))
        layers.append(row)
    return make_circuit(shape, layers)


def _parse_gate(spec, li: int, gi: int) -> Gate:
    if not isinstance(spec, dict) or "qubits" not in spec:
        raise CircuitFormatError("schema", "gate needs 'qubits'", li, gi)
    qubits = spec["qubits"]
    if (not isinstance(qubits, list) or not qubits
            or not all(isinstance(q, int) for q in qubits)):
        raise CircuitFormatError("schema", "'qubits' must be a list of ints", li, gi)
    has_name = "gate" in spec
    has_matrix = "matrix" in spec
    if has_name == has_matrix:
        raise CircuitFormatError("schema", "gate needs exactly one of "
                                 "'gate' or 'matrix'", li, gi)
    if has_name:
        g = spec["gate"]
        if not isinstance(g, dict) or "name" not in g:
            raise CircuitFormatError("schema", "'gate' needs a 'name'", li, gi)
        params = g.get("params", [])
        if not isinstance(params, list) or not all(
                isinstance(p, (int, float)) for p in params):
            raise CircuitFormatError("schema", "'params' must be numbers", li, gi)
        try:
            return named_gate(g["name"], qubits, params)
        except CircuitFormatError as exc:
            raise CircuitFormatError(exc.code, str(exc), li, gi) from exc
    rows = spec["matrix"]
    try:
        mat = np.array([[complex(re, im) for re, im in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise CircuitFormatError("schema", "matrix entries must be [re, im] "
                                 "pairs", li, gi) from exc
    return Gate(tuple(qubits), mat)


def serialize_circuit(circuit: Circuit) -> str:
    """Inverse of :func:`parse_circuit`; bit-exact for explicit matrices."""
    layers = []
    for layer in circuit.layers:
        row = []
        for gate in layer:
            if gate.name is not None:
                row.append({"qubits": list(gate.qubits),
                            "gate": {"name": gate.name,
                                     "params": list(gate.params)}})
            else:
                row.append({"qubits": list(gate.qubits),
                            "matrix": [[[z.real, z.imag] for z in r]
                                       for r in gate.matrix]})
        layers.append(row)
    return json.dumps({"dims": list(circuit.shape.dims), "layers": layers})


# ---------------------------------------------------------------------------
# Lightcones

def lightcone(circuit: Circuit, region) -> frozenset[int]:
    """Forward lightcone of a cell set: sweep the layers in time order and
    absorb every qubit of any gate touching the growing set."""
    s = set(region)
    for layer in circuit.layers:
        for gate in layer:
            if s.intersection(gate.qubits):
                s.update(gate.qubits)
    return frozenset(s)


def localize(circuit: Circuit, region) -> Circuit:
    """Restriction of the circuit that acts identically on the region.

    Keeps exactly the gates absorbed by the forward sweep, so the result acts
    non-trivially only inside ``lightcone(circuit, region)`` and conjugates
    any operator supported on ``region`` the same way the full circuit does.
    """
    s = set(region)
    kept_layers = []
    for layer in circuit.layers:
        kept = []
        for gate in layer:
            if s.intersection(gate.qubits):
                s.update(gate.qubits)
                kept.append(gate)
        kept_layers.append(tuple(kept))
    return Circuit(circuit.shape, tuple(kept_layers))


def lightcone_separated(circuit: Circuit, region_a, region_b) -> bool:
    return not (lightcone(circuit, region_a) & lightcone(circuit, region_b))


def inverse(circuit: Circuit) -> Circuit:
    """Circuit implementing the inverse unitary (reversed, daggered layers)."""
    return Circuit(circuit.shape,
                   tuple(tuple(g.dagger() for g in layer)
                         for layer in reversed(circuit.layers)))
