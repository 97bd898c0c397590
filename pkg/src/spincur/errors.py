"""Exception types shared across the package."""


class SpincurError(Exception):
    """Base class for all errors raised by this package."""


class MalformedFile(SpincurError):
    """Input file is missing a required section or has inconsistent dimensions."""


class UnsupportedShell(SpincurError):
    """Basis shell type outside the supported Cartesian s..g range."""


class UnsupportedElement(SpincurError):
    """No tabulated data (potential fit or radial extent) for an element."""


class ClosedShellInput(SpincurError):
    """Spin density integrates to zero; singlet states are out of scope."""


class DomainError(SpincurError):
    """Argument outside the mathematical domain of an operation."""


class MissingNuclearData(SpincurError):
    """No nuclear g-factor available for a requested isotope."""
