"""Exception hierarchy shared by every privreg module."""


class PrivregError(Exception):
    """Base class for all errors raised by privreg."""


class ShapeError(PrivregError, ValueError):
    pass


class EntryOutOfRange(PrivregError, ValueError):
    pass


class RankDeficient(PrivregError, ValueError):
    pass


class ZeroResidual(PrivregError, ValueError):
    """The least-squares residual vanishes, so r(y) and relative error are undefined."""


class InvalidBudget(PrivregError, ValueError):
    pass


class ProjectionTooLarge(PrivregError, ValueError):
    pass


class ConditionViolated(PrivregError, ValueError):
    """A bound's validity condition (e.g. kappa * Delta < 1) does not hold."""


class DegenerateChannel(PrivregError, ValueError):
    pass


class DegenerateSplit(PrivregError, ValueError):
    pass


class ParseError(PrivregError, ValueError):
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class LabelError(PrivregError, ValueError):
    pass


class IoError(PrivregError, OSError):
    pass
