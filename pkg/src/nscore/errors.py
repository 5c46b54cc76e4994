"""Exception types shared across the package."""


class NehariInfeasible(ValueError):
    """The trial function has nonpositive focusing mass, so no constraint
    scaling exists. Re-initialize with more mass inside the focusing balls."""


class CgStalled(RuntimeError):
    """Conjugate gradient hit its iteration cap before reaching tolerance."""


class AllStartsFailed(RuntimeError):
    """No start of a multi-start solve produced a converged solution."""


class WindowOutsideBox(ValueError):
    """No translate of the cell window fits inside the computational box."""


class ZeroDenominator(ValueError):
    """A concentration ratio was requested for a field vanishing on the
    survey region."""


class DimensionUnsupported(ValueError):
    """The requested problem variant is not defined in this dimension."""


class ParseError(ValueError):
    """A config line could not be parsed."""


class ValidationError(ValueError):
    """A parsed config violates an invariant.

    ``diagnostics`` holds (line_number, message) pairs; line_number is 0 for
    violations that are not tied to a single line.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(f"line {ln}: {msg}" if ln else msg
                          for ln, msg in self.diagnostics)
        super().__init__(lines)


class FormatError(ValueError):
    """A field file is malformed. ``offset`` is the byte position."""

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")
