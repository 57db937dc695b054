"""Two-mode nonlinear coherent states on the fixed-charge Fock ladder."""
from .constructors import (
    StateSpec,
    Truncation,
    build,
    build_by_exponential,
    build_by_recursion,
    build_parity_superposition,
    build_perelomov_closed,
    perelomov_tau,
)
from .errors import (
    ChargeMismatchError,
    ChargeNegativeError,
    ConvergenceError,
    FunctionDomainError,
    FunctionZeroError,
    SchemaError,
    TmnlcsError,
    UnknownNameError,
    ZeroStateError,
)
from .ladder import (
    Action,
    FockLadderState,
    Mode,
    TransformRecord,
    apply_diagonal,
    apply_lower_both,
    apply_lower_mode,
    apply_raise_both,
    apply_raise_mode,
    basis_state,
    inner_product,
    normalize,
)
from .nlfun import (
    NonlinearFunction,
    catalog,
    parse_expression,
    photon_added_function,
    photon_subtracted_function,
    product,
    shifted,
)
from .transforms import KerrParams, kerr_evolve, photon_add, photon_subtract
from .verify import (
    VerificationReport,
    eigen_residual,
    fidelity,
    photon_statistics,
    run_suite,
)

__version__ = "0.1.0"
