"""Exception hierarchy shared by all voalab modules."""


class VoalabError(Exception):
    """Base class; the CLI maps these to exit code 1."""

    code = "error"

    def payload(self):
        return {"code": self.code, "message": str(self)}


class ShapeError(VoalabError):
    code = "shape"


class DomainError(VoalabError):
    """Mixed algebras, malformed tables, bad argument combinations."""

    code = "domain"


class PrecisionError(VoalabError):
    """A truncated-series computation needed coefficients past the window."""

    code = "precision"


class DegenerateInputError(VoalabError):
    """Singular where nonsingular is required (e.g. identically zero det)."""

    code = "degenerate"


class CentralityError(VoalabError):
    code = "centrality"


class CriticalLevelError(VoalabError):
    code = "critical-level"


class TruncationError(VoalabError):
    """Truncation too small to determine a consistent answer."""

    code = "truncation"


class UnsupportedStateError(VoalabError):
    code = "unsupported-state"


class GaugeError(VoalabError):
    code = "gauge"


class OperShapeError(VoalabError):
    code = "oper-shape"


class BranchError(VoalabError):
    """No Miura factorization with the requested leading exponents."""

    code = "branch"


class UnsupportedSpectrumError(VoalabError):
    code = "unsupported-spectrum"


class ResonanceCapError(VoalabError):
    """Log-power bookkeeping exceeded the internal cap."""

    code = "cap"


class NilpotencyError(VoalabError):
    code = "nilpotency"


class InvarianceError(VoalabError):
    code = "invariance"
