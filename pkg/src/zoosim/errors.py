"""Exception taxonomy shared across the stack."""


class ZoosimError(Exception):
    """Base class for all zoosim errors."""


class InvalidScene(ZoosimError):
    pass


class NoPath(ZoosimError):
    pass


class NoSuchObject(ZoosimError):
    pass


class UnsupportedInteraction(ZoosimError):
    pass


class NoSuchEntity(ZoosimError):
    pass


class OccupiedSpawn(ZoosimError):
    pass


class DuplicateId(ZoosimError):
    pass


class InvalidModality(ZoosimError):
    pass


class BadMagic(ZoosimError):
    pass


class Oversize(ZoosimError):
    pass


class Truncated(ZoosimError):
    pass


class EndpointUnavailable(ZoosimError):
    pass


class Timeout(ZoosimError):
    pass


class ProtocolViolation(ZoosimError):
    pass


class ConfigError(ZoosimError):
    """Raised with the offending field path in the message."""


class ActionTypeError(ZoosimError):
    pass


class LifecycleError(ZoosimError):
    """step() called on a finished episode; reset() required."""


class SpawnSpaceExhausted(ZoosimError):
    pass


class EmptyInput(ZoosimError):
    pass


class IOFailure(ZoosimError):
    pass


class ParseFailure(ZoosimError):
    pass


class ConnectError(ZoosimError):
    pass
