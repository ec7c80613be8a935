"""Exception hierarchy shared by every chaoskey module."""


class ChaosKeyError(Exception):
    """Base class for all chaoskey errors."""

    code = "ChaosKeyError"


class DomainError(ChaosKeyError, ValueError):
    code = "DomainError"


class KeyMaterialError(ChaosKeyError, ValueError):
    """Problems with the secret or derived key material."""

    code = "KeyMaterialError"


class EmptyKey(KeyMaterialError):
    code = "EmptyKey"


class KeyTooShort(KeyMaterialError):
    code = "KeyTooShort"


class KeyTooLong(KeyMaterialError):
    code = "KeyTooLong"


class DataError(ChaosKeyError, ValueError):
    """Malformed input data (envelopes, rendered index text)."""

    code = "DataError"


class MalformedIndex(DataError):
    code = "MalformedIndex"


class BadMagic(DataError):
    code = "BadMagic"


class VersionMismatch(DataError):
    code = "VersionMismatch"


class MalformedEnvelope(DataError):
    code = "MalformedEnvelope"


class EmptyInput(ChaosKeyError, ValueError):
    code = "EmptyInput"
