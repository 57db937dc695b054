"""States on a fixed-charge two-mode Fock ladder and the ladder-operator actions.

A state of charge ``q`` lives in ``F_q = span{|n+q, n> : n = 0, 1, 2, ...}`` and is
stored as the amplitude vector ``c_0 ... c_N`` with ``c_n`` multiplying
``|n+q, n>``.  Occupation numbers are never stored: for index ``n`` the mode
occupations are ``n_a = n + q`` and ``n_b = n``.

All operations are pure and return new states.  None of the ladder actions
renormalize; call :func:`normalize` explicitly.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ChargeMismatchError, ChargeNegativeError, ZeroStateError

#: underflow guard for norms and phase gauge
EPS_FLOOR = 1e-300
#: relative weight of the last two rungs below which a truncation is converged
TAIL_TOLERANCE = 1e-14
#: hard cap on the ladder index for adaptive truncation
N_MAX = 4096


class Mode(str, enum.Enum):
    A = "a"
    B = "b"


class Action(str, enum.Enum):
    """Ladder-operator actions with the charge shift each one causes."""

    LOWER_BOTH = "lower_both"
    RAISE_BOTH = "raise_both"
    RAISE_A = "raise_a"
    RAISE_B = "raise_b"
    LOWER_A = "lower_a"
    LOWER_B = "lower_b"
    NUMBER_A = "number_a"
    NUMBER_B = "number_b"
    DIAGONAL_FUNCTION = "diagonal_function"
    PARITY_B = "parity_b"

    @property
    def charge_shift(self) -> int:
        return _CHARGE_SHIFT.get(self, 0)


_CHARGE_SHIFT = {
    Action.RAISE_A: 1,
    Action.LOWER_A: -1,
    Action.RAISE_B: -1,
    Action.LOWER_B: 1,
}


@dataclass(frozen=True)
class TransformRecord:
    """Provenance entry for an operation applied to a state.

    ``operation`` is one of ``photon_add``, ``photon_subtract``, ``kerr`` or
    ``mode_swap``; ``params`` carries the operation arguments (``m``, ``n`` or
    ``gamma_t``).
    """

    operation: str
    input_charge: int
    output_charge: int
    induced_function_label: Optional[str] = None
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "operation": self.operation,
            "input_charge": self.input_charge,
            "output_charge": self.output_charge,
        }
        if self.induced_function_label is not None:
            d["induced_function_label"] = self.induced_function_label
        d.update(self.params)
        return d


@dataclass(frozen=True, eq=False)
class FockLadderState:
    """Complex amplitudes over the ladder ``|n+q, n>``, ``n = 0 ... truncation_n``.

    The amplitude array is copied on construction and made read-only.
    ``provenance`` is a tuple of JSON-compatible dicts describing how the
    state was produced.
    """

    charge_q: int
    amplitudes: np.ndarray
    converged: bool = True
    provenance: tuple = ()

    def __post_init__(self):
        if int(self.charge_q) != self.charge_q or self.charge_q < 0:
            raise ChargeNegativeError(f"charge_q must be a non-negative integer, got {self.charge_q}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size == 0:
            raise ValueError("a ladder state needs at least one amplitude")
        amps.setflags(write=False)
        object.__setattr__(self, "charge_q", int(self.charge_q))
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @property
    def truncation_n(self) -> int:
        return self.amplitudes.size - 1

    @property
    def index(self) -> np.ndarray:
        return np.arange(self.amplitudes.size)

    @property
    def n_a(self) -> np.ndarray:
        return self.index + self.charge_q

    @property
    def n_b(self) -> np.ndarray:
        return self.index

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def with_amplitudes(self, amplitudes, **changes) -> "FockLadderState":
        kw = dict(charge_q=self.charge_q, converged=self.converged, provenance=self.provenance)
        kw.update(changes)
        return FockLadderState(amplitudes=amplitudes, **kw)

    def with_provenance(self, entry) -> "FockLadderState":
        if isinstance(entry, TransformRecord):
            entry = entry.to_dict()
        return self.with_amplitudes(self.amplitudes, provenance=self.provenance + (entry,))

    def padded(self, truncation_n: int) -> np.ndarray:
        """Amplitudes zero-padded (never cut) to ``truncation_n + 1`` entries."""
        out = np.zeros(max(truncation_n, self.truncation_n) + 1, dtype=np.complex128)
        out[: self.amplitudes.size] = self.amplitudes
        return out

    def __repr__(self):
        return (
            f"FockLadderState(charge_q={self.charge_q}, truncation_n={self.truncation_n}, "
            f"norm={self.norm():.6g}, converged={self.converged})"
        )


def basis_state(charge_q: int, n: int = 0, truncation_n: Optional[int] = None) -> FockLadderState:
    """The basis ket ``|n+q, n>`` as a ladder state."""
    size = (n if truncation_n is None else max(truncation_n, n)) + 1
    amps = np.zeros(size, dtype=np.complex128)
    amps[n] = 1.0
    return FockLadderState(charge_q, amps)


def apply_lower_both(state: FockLadderState) -> FockLadderState:
    """Apply ``ab``: ``c'_n = sqrt((n+1)(n+q+1)) c_{n+1}``; the top rung becomes zero."""
    c = state.amplitudes
    n = np.arange(c.size - 1)
    out = np.zeros_like(c)
    out[:-1] = np.sqrt((n + 1.0) * (n + state.charge_q + 1.0)) * c[1:]
    return state.with_amplitudes(out)


def apply_raise_both(state: FockLadderState) -> FockLadderState:
    """Apply ``a^dag b^dag``: ``c'_{n+1} = sqrt((n+1)(n+q+1)) c_n``; grows the truncation by one."""
    c = state.amplitudes
    n = np.arange(c.size)
    out = np.zeros(c.size + 1, dtype=np.complex128)
    out[1:] = np.sqrt((n + 1.0) * (n + state.charge_q + 1.0)) * c
    return state.with_amplitudes(out)


def apply_diagonal(state: FockLadderState, f, support_only: bool = False) -> FockLadderState:
    """Multiply ``c_n`` by ``f(n+q, n)``.

    With ``support_only`` the function is evaluated only where the amplitude is
    nonzero; zero amplitudes stay zero.  This is how functions that are only
    defined on a state's support (shifted photon-added functions, the
    exponential-form generator) get applied.
    """
    c = state.amplitudes
    out = np.zeros_like(c)
    q = state.charge_q
    rungs = np.flatnonzero(c) if support_only else range(c.size)
    for n in rungs:
        n = int(n)
        out[n] = f(n + q, n) * c[n]
    return state.with_amplitudes(out)


def apply_number(state: FockLadderState, mode: Mode | str) -> FockLadderState:
    mode = Mode(mode)
    weights = state.n_a if mode is Mode.A else state.n_b
    return state.with_amplitudes(weights * state.amplitudes)


def apply_parity(state: FockLadderState) -> FockLadderState:
    """Apply ``(-1)^{N_b}``."""
    signs = np.where(state.n_b % 2 == 0, 1.0, -1.0)
    return state.with_amplitudes(signs * state.amplitudes)


def _relabel(state, n_a, n_b, amps, canonicalize):
    """Place amplitudes with new formal occupations back onto a ladder.

    ``n_a - n_b`` is the same for every component.  Components with a negative
    occupation carry zero amplitude and are dropped.  A negative difference is
    handled by swapping the mode labels (recorded in provenance) unless
    ``canonicalize`` is false.
    """
    new_q = int(n_a[0] - n_b[0])
    provenance = state.provenance
    if new_q < 0:
        if not canonicalize:
            raise ChargeNegativeError(
                f"result has photon-number difference {new_q}; pass canonicalize=True to swap modes"
            )
        idx = n_a
        provenance = provenance + (
            TransformRecord("mode_swap", input_charge=new_q, output_charge=-new_q).to_dict(),
        )
        new_q = -new_q
    else:
        idx = n_b
    keep = idx >= 0
    size = int(idx[keep].max()) + 1 if keep.any() else 1
    out = np.zeros(size, dtype=np.complex128)
    out[idx[keep]] = amps[keep]
    return FockLadderState(new_q, out, converged=state.converged, provenance=provenance)


def _rising(start, count):
    """Elementwise ``start (start+1) ... (start+count-1)`` as floats."""
    out = np.ones_like(start, dtype=float)
    for k in range(count):
        out = out * (start + k)
    return out


def apply_raise_mode(state: FockLadderState, mode: Mode | str, count: int = 1,
                     canonicalize: bool = True) -> FockLadderState:
    """Apply ``(a^dag)^count`` or ``(b^dag)^count``.

    Raising ``b`` lowers the charge; if it would go negative the modes are
    relabelled (see :func:`_relabel`).
    """
    mode = Mode(mode)
    if count < 0:
        raise ValueError("count must be non-negative")
    if count == 0:
        return state
    n_a, n_b, c = state.n_a, state.n_b, state.amplitudes
    if mode is Mode.A:
        amps = np.sqrt(_rising(n_a + 1.0, count)) * c
        return _relabel(state, n_a + count, n_b, amps, canonicalize)
    amps = np.sqrt(_rising(n_b + 1.0, count)) * c
    return _relabel(state, n_a, n_b + count, amps, canonicalize)


def apply_lower_mode(state: FockLadderState, mode: Mode | str, count: int = 1,
                     canonicalize: bool = True) -> FockLadderState:
    """Apply ``a^count`` or ``b^count``; components with too few photons vanish."""
    mode = Mode(mode)
    if count < 0:
        raise ValueError("count must be non-negative")
    if count == 0:
        return state
    n_a, n_b, c = state.n_a, state.n_b, state.amplitudes
    if mode is Mode.A:
        # n (n-1) ... (n-count+1); a zero factor appears whenever n < count
        amps = np.sqrt(np.clip(_rising(n_a - count + 1.0, count), 0.0, None)) * c
        amps[n_a < count] = 0.0
        return _relabel(state, n_a - count, n_b, amps, canonicalize)
    amps = np.sqrt(np.clip(_rising(n_b - count + 1.0, count), 0.0, None)) * c
    amps[n_b < count] = 0.0
    return _relabel(state, n_a, n_b - count, amps, canonicalize)


def apply_action(state: FockLadderState, action: Action | str, f=None) -> FockLadderState:
    """Dispatch a single :class:`Action`; ``f`` is required for ``diagonal_function``."""
    action = Action(action)
    if action is Action.LOWER_BOTH:
        return apply_lower_both(state)
    if action is Action.RAISE_BOTH:
        return apply_raise_both(state)
    if action is Action.RAISE_A:
        return apply_raise_mode(state, Mode.A)
    if action is Action.RAISE_B:
        return apply_raise_mode(state, Mode.B)
    if action is Action.LOWER_A:
        return apply_lower_mode(state, Mode.A)
    if action is Action.LOWER_B:
        return apply_lower_mode(state, Mode.B)
    if action is Action.NUMBER_A:
        return apply_number(state, Mode.A)
    if action is Action.NUMBER_B:
        return apply_number(state, Mode.B)
    if action is Action.PARITY_B:
        return apply_parity(state)
    if f is None:
        raise ValueError("diagonal_function needs a nonlinear function")
    return apply_diagonal(state, f)


def inner_product(s1: FockLadderState, s2: FockLadderState) -> complex:
    """``<s1|s2>``, conjugate-linear in the first argument."""
    if s1.charge_q != s2.charge_q:
        raise ChargeMismatchError(f"charge sectors differ: {s1.charge_q} vs {s2.charge_q}")
    size = max(s1.amplitudes.size, s2.amplitudes.size) - 1
    return complex(np.vdot(s1.padded(size), s2.padded(size)))


def add_states(s1: FockLadderState, s2: FockLadderState, w1: complex = 1.0, w2: complex = 1.0) -> FockLadderState:
    """Linear combination ``w1 s1 + w2 s2`` on the longer of the two truncations."""
    if s1.charge_q != s2.charge_q:
        raise ChargeMismatchError(f"charge sectors differ: {s1.charge_q} vs {s2.charge_q}")
    size = max(s1.truncation_n, s2.truncation_n)
    return FockLadderState(
        s1.charge_q,
        w1 * s1.padded(size) + w2 * s2.padded(size),
        converged=s1.converged and s2.converged,
    )


def phase_gauge(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate so the lowest amplitude with modulus above the floor is real positive."""
    nz = np.flatnonzero(np.abs(amplitudes) > EPS_FLOOR)
    if nz.size == 0:
        return amplitudes
    c = amplitudes[nz[0]]
    return amplitudes * (abs(c) / c)


def normalize(state: FockLadderState) -> FockLadderState:
    """Unit norm and the phase gauge of :func:`phase_gauge`."""
    c = state.amplitudes
    scale = np.max(np.abs(c))
    if not scale > EPS_FLOOR:
        raise ZeroStateError("cannot normalize a zero state")
    # pre-scale so the squared sum cannot under- or overflow
    c = c / scale
    nrm = np.sqrt(np.sum(np.abs(c) ** 2))
    return state.with_amplitudes(phase_gauge(c / nrm))


def tail_weight(state: FockLadderState, rungs: int = 2) -> float:
    """Largest relative weight ``|c_n|^2 / sum |c|^2`` among the top ``rungs`` indices."""
    w = np.abs(state.amplitudes) ** 2
    total = max(float(np.sum(w)), EPS_FLOOR)
    return float(np.max(w[-rungs:]) / total)
