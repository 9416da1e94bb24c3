"""Exception hierarchy shared across the package.

CLI exit codes: ConfigError -> 2, FormatError/ProtocolError -> 3,
TrainingError -> 4.
"""


class SplitCodecError(Exception):
    """Base class for all package errors."""


class ContractViolation(SplitCodecError):
    """A caller broke a documented precondition (shape/length mismatch etc.)."""


class ProfileError(SplitCodecError):
    """Invalid reliability-profile parameters."""


class ProtocolError(SplitCodecError):
    """Malformed or inconsistent wire packets."""


class IncompleteSessionError(ProtocolError):
    """A packet session is missing one or more reliability levels."""


class FormatError(SplitCodecError):
    """Malformed dataset/model/config file contents."""


class ConfigError(SplitCodecError):
    """Bad run configuration (unknown key, out-of-range value)."""


class TrainingError(SplitCodecError):
    """Non-finite values or other fatal conditions during training."""
