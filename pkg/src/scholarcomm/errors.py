"""Exception hierarchy shared by every pipeline stage."""


class ScholarlyError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateEntity(ScholarlyError, ValueError):
    pass


class UnknownEntity(ScholarlyError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown entity"


class KindViolation(ScholarlyError, ValueError):
    pass


class WrongKind(ScholarlyError, ValueError):
    pass


class UnknownProperty(ScholarlyError, ValueError):
    pass


class FatalEncoding(ScholarlyError, ValueError):
    pass


class ConflictingRecord(ScholarlyError, ValueError):
    pass


class MethodKindMismatch(ScholarlyError, ValueError):
    pass


class EmptyRelatednessSet(ScholarlyError, ValueError):
    pass


class KTooLarge(ScholarlyError, ValueError):
    pass


class EmptyPartition(ScholarlyError, ValueError):
    pass


class UniverseMismatch(ScholarlyError, ValueError):
    pass


class DegenerateSplit(ScholarlyError, ValueError):
    pass


class NoPredictions(ScholarlyError, ValueError):
    pass


class InvalidSpec(ScholarlyError, ValueError):
    pass
