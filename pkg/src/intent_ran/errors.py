"""Exception hierarchy shared across the pipeline."""


class IntentRanError(Exception):
    """Base class for all package errors."""


class IntentSyntaxError(IntentRanError, ValueError):
    """Document is not well-formed YAML/JSON."""


class SchemaError(IntentRanError, ValueError):
    """Document parsed but violates the intent schema."""


class MissingTarget(IntentRanError, KeyError):
    pass


class ConditionMismatch(IntentRanError, ValueError):
    pass


class DimensionError(IntentRanError, ValueError):
    pass


class RangeError(IntentRanError, ValueError):
    pass


class EmptyInput(IntentRanError, ValueError):
    pass


class InconsistentModel(IntentRanError, ValueError):
    pass


class ConfigError(IntentRanError, ValueError):
    pass


class DomainError(IntentRanError, ValueError):
    pass


class CapacityError(IntentRanError, ValueError):
    pass


class SchedulingError(IntentRanError, ValueError):
    pass


class InvalidOp(IntentRanError, ValueError):
    pass


class BoundsError(IntentRanError, ValueError):
    pass


class InsufficientData(IntentRanError, RuntimeError):
    pass
