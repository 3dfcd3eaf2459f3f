class MCSPError(Exception):
    pass


class InvalidValue(MCSPError, ValueError):
    pass


class MismatchedEdgeSet(MCSPError):
    pass


class EmptyGraph(MCSPError):
    pass


class PreconditionViolated(MCSPError):
    pass


class ArithmeticOverflow(MCSPError, OverflowError):
    pass


class EmptyHop(MCSPError):
    pass


class InvalidVertex(MCSPError, IndexError):
    pass


class InvalidProvenance(MCSPError):
    pass


class TooLarge(MCSPError):
    pass


class BucketEmpty(MCSPError):
    pass


class BadIndexFormat(MCSPError):
    pass


class VersionMismatch(BadIndexFormat):
    pass
