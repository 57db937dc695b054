"""Photon addition, photon subtraction and Kerr evolution of ladder states.

The add/subtract transforms return the normalized output state together with
the nonlinear function it is an eigenstate of (same eigenvalue as the input).
When the photon-number difference would turn negative the modes are relabelled
and the induced function is swapped to match.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ladder
from .errors import FunctionZeroError
from .ladder import FockLadderState, Mode, TransformRecord
from .nlfun import (
    NonlinearFunction,
    photon_added_function,
    photon_subtracted_function,
    swapped,
)

__all__ = [
    "KerrParams",
    "TransformRecord",
    "commutator_action",
    "commutator_partner",
    "kerr_evolve",
    "photon_add",
    "photon_subtract",
]


@dataclass(frozen=True)
class KerrParams:
    """Accumulated Kerr phase ``gamma * t`` in radians."""

    gamma_t: float

    def __post_init__(self):
        if not math.isfinite(self.gamma_t):
            raise ValueError("gamma_t must be finite")


def _check_counts(m, n):
    if m < 0 or n < 0 or int(m) != m or int(n) != n:
        raise ValueError(f"photon counts must be non-negative integers, got m={m}, n={n}")


def photon_add(state: FockLadderState, f: NonlinearFunction, m: int, n: int):
    """Normalized ``a^dag^m b^dag^n |psi>``, its induced function, and the record.

    ``a^dag`` is applied first so that at most one mode relabelling can occur.
    """
    _check_counts(m, n)
    q = state.charge_q
    induced = photon_added_function(f, m, n)
    raw_charge = q + m - n
    out = ladder.apply_raise_mode(state, Mode.A, m)
    out = ladder.apply_raise_mode(out, Mode.B, n)
    if raw_charge < 0:
        induced = swapped(induced)
    out = ladder.normalize(out)
    record = TransformRecord("photon_add", q, out.charge_q, induced.label, {"m": m, "n": n})
    return out.with_provenance(record), induced, record


def photon_subtract(state: FockLadderState, f: NonlinearFunction, m: int, n: int):
    """Normalized ``a^m b^n |psi>``, its induced function ``f(N_a+m, N_b+n)``, and the record.

    Raises :class:`~tmnlcs.errors.ZeroStateError` when the lowering annihilates
    the whole state.
    """
    _check_counts(m, n)
    q = state.charge_q
    induced = photon_subtracted_function(f, m, n)
    raw_charge = q - m + n
    out = ladder.apply_lower_mode(state, Mode.B, n)
    out = ladder.apply_lower_mode(out, Mode.A, m)
    if raw_charge < 0:
        induced = swapped(induced)
    out = ladder.normalize(out)
    record = TransformRecord("photon_subtract", q, out.charge_q, induced.label, {"m": m, "n": n})
    return out.with_provenance(record), induced, record


def kerr_evolve(state: FockLadderState, params: KerrParams | float):
    """Apply ``exp(-i gamma_t N_b (N_b - 1))``; on the ladder ``N_b`` is the rung index."""
    if not isinstance(params, KerrParams):
        params = KerrParams(float(params))
    n = state.n_b.astype(float)
    # n(n-1) is an exact integer in floating point for any realistic truncation
    phase = np.exp(-1j * params.gamma_t * (n * (n - 1.0)))
    record = TransformRecord("kerr", state.charge_q, state.charge_q, None, {"gamma_t": params.gamma_t})
    out = state.with_amplitudes(phase * state.amplitudes)
    return out.with_provenance(record), record


def commutator_partner(f: NonlinearFunction) -> NonlinearFunction:
    """``h(N_a, N_b) = 1 / (f(N_a - 1, N_b - 1) N_a)``, so that ``[f ab, h a^dag b^dag] = 1``."""

    def h(na, nb):
        fv = f(na - 1, nb - 1)
        if fv == 0:
            raise FunctionZeroError(nb - 1, f.label)
        return 1.0 / (fv * na)

    return NonlinearFunction(h, f"1/({f.label}(Na-1,Nb-1)*Na)")


def commutator_action(state: FockLadderState, f: NonlinearFunction) -> FockLadderState:
    """Apply ``[f ab, h a^dag b^dag]`` with ``h`` from :func:`commutator_partner`.

    Both orderings only read rungs ``0 ... truncation_n``, so the result is exact
    on every retained rung.
    """
    h = commutator_partner(f)
    up = ladder.apply_diagonal(ladder.apply_raise_both(state), h, support_only=True)
    first = ladder.apply_diagonal(ladder.apply_lower_both(up), f, support_only=True)
    down = ladder.apply_diagonal(ladder.apply_lower_both(state), f, support_only=True)
    second = ladder.apply_diagonal(ladder.apply_raise_both(down), h, support_only=True)
    size = state.truncation_n
    diff = first.padded(size + 1) - second.padded(size + 1)
    return state.with_amplitudes(diff[: size + 1])
