"""Exception hierarchy shared across the package."""


class FrameCalcError(Exception):
    """Base class for all package errors."""


class ScalarParseError(FrameCalcError, ValueError):
    """Malformed scalar literal.  Carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class ParameterError(FrameCalcError, ValueError):
    """A polynomial scalar appeared where a rational is required, or two
    distinct formal parameters were mixed."""


class ShapeError(FrameCalcError, ValueError):
    """Dimension, valence, or slot mismatch."""


class AlgebraError(FrameCalcError, ValueError):
    """Structure constants fail antisymmetry or the Jacobi identity.

    ``violations`` lists ("antisymmetry", (i, j, k), residual) and
    ("jacobi", (i, j, k, l), residual) tuples, 1-based indices.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        head = ", ".join(f"{kind} at {idx}" for kind, idx, _ in self.violations[:4])
        more = "" if len(self.violations) <= 4 else f" (+{len(self.violations) - 4} more)"
        super().__init__(f"invalid structure constants: {head}{more}")


class FormError(FrameCalcError, ValueError):
    """A candidate symplectic form is degenerate or ill-shaped."""


class PreconditionError(FrameCalcError, ValueError):
    """A geometric precondition (torsion-free, form-preserving) failed."""


class ConventionFault(FrameCalcError, AssertionError):
    """Two internal routes that must agree by convention disagreed.

    This indicates a bug in the package, never a user error.
    """


class StabilizationError(FrameCalcError, RuntimeError):
    """Holonomy span failed to stabilize within the derivative-order cap."""


class InconsistencyError(FrameCalcError, RuntimeError):
    """An affine linear system admitted no solution."""


class SpecFileError(FrameCalcError):
    """Base class for model spec file problems."""


class SpecSyntaxError(SpecFileError, ValueError):
    """The file is not well-formed (JSON or scalar literal syntax)."""


class SpecSemanticError(SpecFileError, ValueError):
    """The file is well-formed but violates a structural rule."""
