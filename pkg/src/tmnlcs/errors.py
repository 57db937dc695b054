"""Exception hierarchy shared by every module of the package."""


class TmnlcsError(Exception):
    """Base class for all domain errors raised by :mod:`tmnlcs`."""


class FunctionDomainError(TmnlcsError, ValueError):
    """A nonlinear function was evaluated outside the set where it is defined."""

    def __init__(self, n_a, n_b, label="", reason=""):
        self.n_a = n_a
        self.n_b = n_b
        self.label = label
        msg = f"function {label!r} undefined at (n_a={n_a}, n_b={n_b})"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class FunctionZeroError(TmnlcsError):
    """The nonlinear function vanishes on a rung the recursion has to divide by."""

    def __init__(self, rung, label=""):
        self.rung = rung
        self.label = label
        super().__init__(f"function {label!r} vanishes on ladder rung n={rung}")


class ConvergenceError(TmnlcsError):
    """Adaptive truncation did not meet the tail criterion before the hard cap."""


class ChargeNegativeError(TmnlcsError):
    """An operation would produce a negative photon-number difference."""


class ChargeMismatchError(TmnlcsError, ValueError):
    """Two states living in different charge sectors were combined."""


class ZeroStateError(TmnlcsError):
    """The state has (numerically) zero norm and cannot be normalized."""


class UnknownNameError(TmnlcsError, LookupError):
    """Catalog lookup with an unrecognised name."""


class SchemaError(TmnlcsError):
    """A JSON document does not match the expected file schema."""
