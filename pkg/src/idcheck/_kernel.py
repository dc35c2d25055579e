"""Low-level dense gate application.

Arrays carry one axis of length 2 per qubit, in a caller-chosen order; any
trailing axes are batch dimensions (so the same code streams gates onto
state vectors and onto the row index of a matrix).
"""

from __future__ import annotations

import numpy as np


def apply_gate(arr: np.ndarray, mat: np.ndarray, axes) -> np.ndarray:
    """Apply a 1- or 2-qubit gate matrix to the given qubit axes of ``arr``.

    ``axes`` lists the axis positions in the gate's qubit order (first listed
    qubit is the most significant index of ``mat``).
    """
    k = len(axes)
    t = mat.reshape((2,) * (2 * k))
    out = np.tensordot(t, arr, axes=(tuple(range(k, 2 * k)), tuple(axes)))
    return np.moveaxis(out, range(k), axes)


def apply_gates(arr: np.ndarray, layers, axis_of, dagger: bool = False) -> np.ndarray:
    """Stream circuit layers onto ``arr``.

    ``axis_of`` maps a global qubit label to an axis of ``arr``.  With
    ``dagger`` the inverse circuit is applied (reversed layers, adjoint
    matrices).
    """
    seq = reversed(layers) if dagger else layers
    for layer in seq:
        for gate in layer:
            mat = gate.matrix.conj().T if dagger else gate.matrix
            arr = apply_gate(arr, mat, [axis_of[q] for q in gate.qubits])
    return arr


def swap_axes_operator(arr: np.ndarray, axis_a: int, axis_b: int) -> np.ndarray:
    """Apply a SWAP between two qubit axes (as an operator, not a relabeling)."""
    return np.swapaxes(arr, axis_a, axis_b)
