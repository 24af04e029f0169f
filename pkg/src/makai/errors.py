"""Exception hierarchy shared across the package."""


class MakaiError(Exception):
    """Base class; ``kind`` is the machine-readable error tag used by the CLI."""

    kind = "MakaiError"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class InputError(MakaiError):
    """Problems with user-supplied data (bad bodies, bad files, bad flags)."""

    kind = "InputError"


class DegenerateBody(InputError):
    kind = "DegenerateBody"


class Unbounded(InputError):
    kind = "Unbounded"


class DimensionUnsupported(InputError):
    kind = "DimensionUnsupported"


class OutsideBody(InputError):
    kind = "OutsideBody"


class EmptyErosion(InputError):
    kind = "EmptyErosion"


class NoClosedForm(InputError):
    kind = "NoClosedForm"


class NotThinRepresentable(InputError):
    kind = "NotThinRepresentable"


class LPFailure(MakaiError):
    kind = "LPFailure"


class MeshBudgetExceeded(MakaiError):
    kind = "MeshBudgetExceeded"


class SolverDiverged(MakaiError):
    kind = "SolverDiverged"


class NoRoot(MakaiError):
    kind = "NoRoot"


class CheckFailed(MakaiError):
    """A mathematically certain check failed beyond tolerance."""

    kind = "CheckFailed"

    def __init__(self, check_id: str, margin: float):
        super().__init__(f"check {check_id!r} failed with margin {margin:.3e}")
        self.check_id = check_id
        self.margin = margin


class InconsistentBounds(CheckFailed):
    kind = "InconsistentBounds"


class CertFailed(MakaiError):
    kind = "CertFailed"

    def __init__(self, z, value, what: str = "h"):
        super().__init__(f"certificate {what} failed at z={z}: value {value}")
        self.z = z
        self.value = value
