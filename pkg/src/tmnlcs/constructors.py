"""Construction of two-mode nonlinear coherent states.

Two independent routes build the eigenstate of ``f(N_a, N_b) ab`` with
eigenvalue ``alpha`` in the charge-``q`` sector:

* :func:`build_by_recursion` accumulates the coefficient ratios
  ``C_{n+1}/C_n = alpha / (f(n+q, n) sqrt((n+1)(n+q+1)))``;
* :func:`build_by_exponential` sums ``sum_k [g a^dag b^dag]^k / k! |q,0>`` with
  ``g = alpha / (f(N_a-1, N_b-1) N_a)`` term by term through ladder actions.

Factorials are never evaluated; amplitudes are grown by ratios and rescaled
when they get large, so ladders of a few thousand rungs are fine.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import ladder
from .errors import ConvergenceError, FunctionZeroError, SchemaError
from .ladder import FockLadderState
from .nlfun import NonlinearFunction, catalog, resolve

KINDS = ("custom", "pair", "perelomov", "parity_pair", "parity_perelomov")
_KIND_FUNCTION = {
    "pair": "unity",
    "perelomov": "perelomov_reduced",
    "parity_pair": "parity_b",
    "parity_perelomov": "parity_perelomov",
}
_RESCALE = 1e150


def max_truncation() -> int:
    """Hard cap on the ladder index; ``TMNLCS_MAX_TRUNC`` overrides the default."""
    value = os.environ.get("TMNLCS_MAX_TRUNC")
    return int(value) if value else ladder.N_MAX


def perelomov_tau(xi: complex) -> complex:
    """Eigenvalue ``xi tanh|xi| / |xi|`` of a two-mode Perelomov state (0 at ``xi = 0``)."""
    r = abs(xi)
    if r == 0:
        return 0j
    return complex(xi) * math.tanh(r) / r


@dataclass(frozen=True)
class Truncation:
    """``adaptive`` grows until the tail criterion holds (``param`` = tolerance);
    ``fixed`` keeps rungs ``0 ... int(param)``."""

    mode: str = "adaptive"
    param: float = ladder.TAIL_TOLERANCE

    def __post_init__(self):
        if self.mode not in ("adaptive", "fixed"):
            raise ValueError(f"truncation mode must be 'adaptive' or 'fixed', got {self.mode!r}")

    @classmethod
    def fixed(cls, n: int) -> "Truncation":
        return cls("fixed", int(n))

    @property
    def tail_tolerance(self) -> float:
        return self.param if self.mode == "adaptive" else ladder.TAIL_TOLERANCE


@dataclass(frozen=True)
class StateSpec:
    """Recipe for a state.

    For ``perelomov`` and ``parity_perelomov`` the ``eigenvalue`` field holds the
    group parameter ``xi``; the eigenvalue of the defining equation is derived
    from it (:func:`perelomov_tau`).  ``custom`` kinds need ``function``.
    """

    kind: str
    eigenvalue: complex
    charge_q: int = 0
    truncation: Truncation = field(default_factory=Truncation)
    function: Optional[NonlinearFunction] = None
    allow_unconverged: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; choose from {KINDS}")
        if self.kind == "custom" and self.function is None:
            raise ValueError("custom kind requires a nonlinear function")
        if self.charge_q < 0:
            raise ValueError("charge_q must be non-negative")
        object.__setattr__(self, "eigenvalue", complex(self.eigenvalue))
        if not (math.isfinite(self.eigenvalue.real) and math.isfinite(self.eigenvalue.imag)):
            raise ValueError("eigenvalue must be finite")

    def nonlinear_function(self) -> NonlinearFunction:
        if self.kind == "custom":
            return self.function
        return catalog(_KIND_FUNCTION[self.kind], self.charge_q)

    def effective_eigenvalue(self) -> complex:
        if self.kind in ("perelomov", "parity_perelomov"):
            return perelomov_tau(self.eigenvalue)
        return self.eigenvalue

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "charge_q": self.charge_q,
            "truncation": {"mode": self.truncation.mode, "param": self.truncation.param},
        }
        if self.kind == "custom":
            d["function"] = self.function.label
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StateSpec":
        try:
            kind = d["kind"]
            re, im = d["eigenvalue"]
            q = int(d.get("charge_q", 0))
            tr = d.get("truncation", {"mode": "adaptive", "param": ladder.TAIL_TOLERANCE})
            truncation = Truncation(tr["mode"], tr["param"])
            function = resolve(d["function"], q) if "function" in d else None
            return cls(kind, complex(re, im), q, truncation, function)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"invalid state spec: {exc}") from None


def _record(method, spec, f):
    return {
        "operation": method,
        "kind": spec.kind,
        "function": f.label,
        "eigenvalue": [spec.eigenvalue.real, spec.eigenvalue.imag],
        "charge_q": spec.charge_q,
    }


def _grow(first, step, truncation: Truncation, allow_unconverged: bool):
    """Generate amplitudes ``c_0, c_1, ...`` with ``c_{n+1} = step(n, c_n)``.

    Returns ``(amplitudes, converged)``.  Under the adaptive policy growth stops
    once the last two rungs both weigh less than the tolerance relative to the
    running total, or at the hard cap.
    """
    tol = truncation.tail_tolerance
    cap = int(truncation.param) if truncation.mode == "fixed" else max_truncation()
    amps = [complex(first)]
    weight = abs(first) ** 2
    n = 0
    while n < cap:
        nxt = step(n, amps[-1])
        amps.append(nxt)
        weight += abs(nxt) ** 2
        n += 1
        if abs(nxt) > _RESCALE:
            amps = [a / _RESCALE for a in amps]
            weight /= _RESCALE**2
        if truncation.mode == "adaptive" and n >= 2:
            if max(abs(amps[-1]) ** 2, abs(amps[-2]) ** 2) < tol * weight:
                return np.array(amps), True
    out = np.array(amps)
    converged = bool(np.max(np.abs(out[-2:]) ** 2) < tol * np.sum(np.abs(out) ** 2)) if out.size > 1 else True
    return out, converged


def _finish(amps, converged, spec, provenance):
    if not converged and spec.truncation.mode == "adaptive" and not spec.allow_unconverged:
        raise ConvergenceError(
            f"tail criterion not met by rung {amps.size - 1} (cap {max_truncation()}); "
            "raise TMNLCS_MAX_TRUNC or allow unconverged states"
        )
    state = FockLadderState(spec.charge_q, amps, converged=converged, provenance=(provenance,))
    return ladder.normalize(state)


def build_by_recursion(spec: StateSpec) -> FockLadderState:
    """Coefficient recursion; the normalization constant is applied numerically."""
    f = spec.nonlinear_function()
    alpha = spec.effective_eigenvalue()
    q = spec.charge_q

    def step(n, c):
        if c == 0:
            return 0j
        fn = f(n + q, n)
        if fn == 0:
            raise FunctionZeroError(n, f.label)
        return alpha * c / (fn * math.sqrt((n + 1) * (n + q + 1)))

    amps, converged = _grow(1.0, step, spec.truncation, spec.allow_unconverged)
    return _finish(amps, converged, spec, _record("recursion", spec, f))


def exponential_generator(f: NonlinearFunction, alpha: complex) -> NonlinearFunction:
    """``g(N_a, N_b) = alpha / (f(N_a - 1, N_b - 1) N_a)``."""

    def g(na, nb):
        fv = f(na - 1, nb - 1)
        if fv == 0:
            raise FunctionZeroError(nb - 1, f.label)
        return alpha / (fv * na)

    return NonlinearFunction(g, f"{alpha!r}/({f.label}(Na-1,Nb-1)*Na)")


def build_by_exponential(spec: StateSpec) -> FockLadderState:
    """Sum the exponential series ``exp[g a^dag b^dag] |q,0>`` term by term.

    Each term is obtained from the previous one by ``a^dag b^dag`` followed by the
    diagonal ``g`` and division by ``k``.  The sum stops when the next term's
    weight drops below ``1e-16`` of the accumulated norm (two terms in a row)
    under the adaptive policy, or after ``N`` terms under the fixed policy.
    """
    f = spec.nonlinear_function()
    alpha = spec.effective_eigenvalue()
    g = exponential_generator(f, alpha)
    q = spec.charge_q
    fixed = spec.truncation.mode == "fixed"
    cap = int(spec.truncation.param) if fixed else max_truncation()

    term = ladder.basis_state(q)
    total = np.array([1.0 + 0j])
    weight = 1.0
    small = 0
    converged = fixed
    k = 0
    while k < cap:
        k += 1
        term = ladder.apply_diagonal(ladder.apply_raise_both(term), g, support_only=True)
        term = term.with_amplitudes(term.amplitudes / k)
        contrib = term.amplitudes[-1]
        scale = np.max(np.abs(term.amplitudes))
        if scale > _RESCALE:
            term = term.with_amplitudes(term.amplitudes / _RESCALE)
            total = total / _RESCALE
            weight /= _RESCALE**2
            contrib /= _RESCALE
        total = np.append(total, 0j) + term.amplitudes
        weight += abs(contrib) ** 2
        if not fixed:
            small = small + 1 if abs(contrib) ** 2 < 1e-16 * weight else 0
            if small >= 2:
                converged = True
                break
    if fixed:
        w = np.abs(total) ** 2
        converged = bool(np.max(w[-2:]) < ladder.TAIL_TOLERANCE * np.sum(w)) if w.size > 1 else True
    return _finish(total, converged, spec, _record("exponential", spec, f))


def build_perelomov_closed(xi: complex, q: int = 0, truncation: Optional[Truncation] = None,
                           allow_unconverged: bool = False) -> FockLadderState:
    """Closed form ``c_n ~ tau^n sqrt((n+q)! / (n! q!))`` with ``tau = xi tanh|xi| / |xi|``."""
    truncation = truncation or Truncation()
    tau = perelomov_tau(xi)
    if abs(tau) >= 1:
        raise ConvergenceError(f"|tau| = {abs(tau)} >= 1: the series does not converge")
    spec = StateSpec("perelomov", xi, q, truncation, allow_unconverged=allow_unconverged)
    amps, converged = _grow(
        1.0, lambda n, c: c * tau * math.sqrt((n + q + 1) / (n + 1)), truncation, allow_unconverged
    )
    return _finish(amps, converged, spec, _record("perelomov_closed", spec, catalog("perelomov_reduced")))


def build_parity_superposition(base_kind: str, eigenvalue: complex, q: int = 0,
                               truncation: Optional[Truncation] = None,
                               allow_unconverged: bool = False) -> FockLadderState:
    """``(e^{-i pi/4} |i z, q> + e^{i pi/4} |-i z, q>) / sqrt 2`` for a pair or Perelomov base.

    The two components overlap, so the sum is renormalized.
    """
    truncation = truncation or Truncation()
    eigenvalue = complex(eigenvalue)
    if base_kind == "pair":
        def build(z):
            return build_by_recursion(StateSpec("pair", z, q, truncation, allow_unconverged=allow_unconverged))
    elif base_kind == "perelomov":
        def build(z):
            return build_perelomov_closed(z, q, truncation, allow_unconverged)
    else:
        raise ValueError(f"base_kind must be 'pair' or 'perelomov', got {base_kind!r}")
    plus = build(1j * eigenvalue)
    minus = build(-1j * eigenvalue)
    w = 1 / math.sqrt(2)
    total = ladder.add_states(plus, minus, w * np.exp(-1j * np.pi / 4), w * np.exp(1j * np.pi / 4))
    kind = "parity_pair" if base_kind == "pair" else "parity_perelomov"
    spec = StateSpec(kind, eigenvalue, q, truncation)
    state = FockLadderState(q, total.amplitudes, converged=total.converged,
                            provenance=(_record("parity_superposition", spec, spec.nonlinear_function()),))
    return ladder.normalize(state)


def build(spec: StateSpec, method: str = "recursion") -> FockLadderState:
    """Build ``spec`` by ``recursion``, ``exponential``, or ``closed`` (Perelomov and parity kinds)."""
    if method == "recursion":
        return build_by_recursion(spec)
    if method == "exponential":
        return build_by_exponential(spec)
    if method == "closed":
        if spec.kind == "perelomov":
            return build_perelomov_closed(spec.eigenvalue, spec.charge_q, spec.truncation, spec.allow_unconverged)
        if spec.kind in ("parity_pair", "parity_perelomov"):
            base = "pair" if spec.kind == "parity_pair" else "perelomov"
            return build_parity_superposition(base, spec.eigenvalue, spec.charge_q, spec.truncation,
                                              spec.allow_unconverged)
        if spec.kind == "pair":
            return build_by_recursion(spec)
        raise ValueError("no closed form for custom kinds")
    raise ValueError(f"unknown construction method {method!r}")
