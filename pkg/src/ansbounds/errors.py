"""Exception hierarchy shared by the coders and the container."""


class ContractError(ValueError):
    """A caller violated an operation's precondition."""


class DecodeError(ValueError):
    """The bitstream or final state cannot be decoded (truncated or corrupt)."""


class ContainerError(ValueError):
    """Base class for malformed container files."""


class BadMagicError(ContainerError):
    pass


class BadVersionError(ContainerError):
    pass


class BadCodecError(ContainerError):
    pass


class BadParameterError(ContainerError):
    pass


class BadFrequencySumError(ContainerError):
    pass


class StateOutOfRangeError(ContainerError):
    pass


class TruncatedPayloadError(ContainerError):
    pass


class TrailingDataError(ContainerError):
    pass


class TruncatedHeaderError(ContainerError):
    pass


class BadPaddingError(ContainerError):
    pass
