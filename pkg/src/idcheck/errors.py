"""Exception hierarchy shared by all modules.

Validation problems (malformed input, broken preconditions) and resource
problems (dense size caps, non-convergent iterations) are kept in separate
branches so the CLI can map them to distinct exit codes.
"""

from __future__ import annotations


class IdCheckError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(IdCheckError):
    """Invalid input or a violated precondition.  CLI exit code 2."""


class CircuitFormatError(ValidationError):
    """Circuit document rejected.  Carries a machine-readable code plus the
    offending layer/gate index where applicable."""

    def __init__(self, code: str, message: str, layer: int | None = None,
                 gate: int | None = None):
        self.code = code
        self.layer = layer
        self.gate = gate
        where = ""
        if layer is not None:
            where = f" (layer {layer}" + (f", gate {gate}" if gate is not None else "") + ")"
        super().__init__(f"[{code}]{where} {message}")


class PartitionError(ValidationError):
    """Partition construction rejected (e.g. cube size not a multiple of D)."""


class SeparationError(ValidationError):
    """A same-color cube pair is not lightcone separated for the given circuit."""

    def __init__(self, color: int, cube_a, cube_b, message: str = ""):
        self.color = color
        self.cube_a = cube_a
        self.cube_b = cube_b
        super().__init__(
            f"cubes at anchors {tuple(cube_a.anchor)} and {tuple(cube_b.anchor)} "
            f"in color class {color} are not lightcone separated"
            + (f": {message}" if message else "")
        )


class InapplicabilityError(ValidationError):
    """A requested method does not apply to the given circuit."""


class SizingError(IdCheckError):
    """A dense object would exceed the configured qubit cap.  CLI exit code 3."""


class ConvergenceError(IdCheckError):
    """An iterative numerical routine failed to converge.  CLI exit code 3."""


class IndeterminateError(IdCheckError):
    """The requested quantity cannot be certified by the chosen method."""
