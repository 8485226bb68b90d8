"""Shared exception types."""


class LevelError(ValueError):
    """A field-level operation was asked for incompatible tower levels."""


class CharacteristicClashError(ValueError):
    """Coefficient characteristic coincides with the defining characteristic."""


class NotInSteinbergError(ValueError):
    """A module vector does not lie in the span of the unipotent translates of eta."""
