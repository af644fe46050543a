"""Exception hierarchy shared by the generators, classifier and solver."""


class PPDMError(Exception):
    """Base class. ``to_dict`` gives the structured form the CLI prints."""

    kind = "error"

    def __init__(self, message, **info):
        super().__init__(message)
        self.info = info

    def to_dict(self):
        out = {"error": self.kind, "message": str(self)}
        out.update({k: _plain(v) for k, v in self.info.items()})
        return out


class InvalidInput(PPDMError, ValueError):
    kind = "InvalidInput"


class InfeasibleParameters(PPDMError, ValueError):
    """Class parameters admit no real solution (``index`` names the wall)."""

    kind = "InfeasibleParameters"


class DegenerateClassParameters(PPDMError, ValueError):
    kind = "DegenerateClassParameters"


class OverconstrainedClass(PPDMError, ValueError):
    kind = "OverconstrainedClass"


class AmbiguousOrDegenerate(PPDMError):
    kind = "AmbiguousOrDegenerate"


class DegenerateTrajectoryOrRoom(PPDMError):
    kind = "DegenerateTrajectoryOrRoom"


def _plain(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    return value
