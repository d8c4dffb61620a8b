"""Exception types raised across the package."""


class FermiCtxError(Exception):
    """Base class for all package errors."""


class NormalizationError(FermiCtxError, ValueError):
    """Amplitudes or weights do not sum to one within tolerance."""


class DomainError(FermiCtxError, ValueError):
    """Argument outside the domain of an operation (bad mode index, Pauli
    exclusion violation, wrong mode count, ...)."""


class CapacityError(FermiCtxError, RuntimeError):
    """Dense materialization or enumeration would exceed the configured cap."""
