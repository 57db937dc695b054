"""Residuals, fidelities, photon statistics and aggregated verification reports."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import ladder
from .constructors import (
    StateSpec,
    build_by_exponential,
    build_by_recursion,
    build_parity_superposition,
)
from .errors import ChargeMismatchError, TmnlcsError
from .ladder import FockLadderState
from .nlfun import CATALOG_NAMES, NonlinearFunction, catalog
from .transforms import commutator_action, kerr_evolve, photon_add, photon_subtract

RESIDUAL_TOL = 1e-10
FIDELITY_TOL = 1e-10


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    error: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "value": self.value, "tolerance": self.tolerance, "passed": self.passed}
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def overall_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, value: float, tolerance: float) -> Check:
        """Record ``value < tolerance``; a non-finite value always fails."""
        value = float(value)
        passed = math.isfinite(value) and value < tolerance
        check = Check(name, value if math.isfinite(value) else 1.0, tolerance, passed,
                      None if math.isfinite(value) else "non-finite value")
        self.checks.append(check)
        return check

    def add_error(self, name: str, exc: Exception) -> Check:
        # value 1.0 is a failure marker; reported values stay finite
        check = Check(name, 1.0, 0.0, False, f"{type(exc).__name__}: {exc}")
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        return self

    def to_dict(self) -> dict:
        return {"checks": [c.to_dict() for c in self.checks], "overall_passed": self.overall_passed}


def eigen_residual(state: FockLadderState, f: NonlinearFunction, alpha: complex) -> float:
    """``|| f ab |psi> - alpha |psi> || / max(|alpha|, 1)`` over rungs below the top.

    ``ab`` reads ``c_{n+1}``, which the top rung does not have; the dropped tail
    is reported separately by :func:`ladder.tail_weight`.
    """
    lowered = ladder.apply_lower_both(state)
    acted = ladder.apply_diagonal(lowered, f, support_only=True)
    diff = acted.amplitudes[:-1] - alpha * state.amplitudes[:-1]
    return float(np.linalg.norm(diff) / max(abs(alpha), 1.0))


def fidelity(s1: FockLadderState, s2: FockLadderState) -> float:
    """``|<s1|s2>| / (||s1|| ||s2||)``."""
    if s1.charge_q != s2.charge_q:
        raise ChargeMismatchError(f"charge sectors differ: {s1.charge_q} vs {s2.charge_q}")
    return abs(ladder.inner_product(s1, s2)) / (s1.norm() * s2.norm())


def phase_operator_difference(state: FockLadderState) -> float:
    """Norm of ``[1/sqrt((1+N_a)(1+N_b)) - 1/(1+N_a)] ab |psi>`` for a charge-0 state."""
    if state.charge_q != 0:
        raise ChargeMismatchError(f"phase-operator equivalence holds on charge 0 only, got {state.charge_q}")
    lowered = ladder.apply_lower_both(state)
    na, nb = lowered.n_a.astype(float), lowered.n_b.astype(float)
    phase_op = lowered.amplitudes / np.sqrt((1.0 + na) * (1.0 + nb))
    reduced = lowered.amplitudes / (1.0 + na)
    return float(np.linalg.norm(phase_op - reduced))


def check_phase_operator_equivalence(q0_states: Iterable[FockLadderState], tolerance: float = 1e-12):
    states = list(q0_states)
    for s in states:
        if s.charge_q != 0:
            raise ChargeMismatchError(f"phase-operator equivalence holds on charge 0 only, got {s.charge_q}")
    report = VerificationReport()
    for i, s in enumerate(states):
        report.add(f"phase_operator[{i}]", phase_operator_difference(s), tolerance)
    return report


def photon_statistics(state: FockLadderState) -> dict:
    """Photon-number moments from the ``|c_n|^2`` weights.

    ``mandel_q_b`` is ``None`` when ``<N_b>`` is below ``1e-12``.
    """
    w = np.abs(state.amplitudes) ** 2
    w = w / np.sum(w)
    na, nb = state.n_a.astype(float), state.n_b.astype(float)
    mean_na, mean_nb = float(w @ na), float(w @ nb)
    var_na = float(w @ (na - mean_na) ** 2)
    var_nb = float(w @ (nb - mean_nb) ** 2)
    cross = float(w @ (na * nb)) - mean_na * mean_nb
    mandel = (var_nb - mean_nb) / mean_nb if mean_nb >= 1e-12 else None
    return {
        "mean_na": mean_na,
        "mean_nb": mean_nb,
        "var_na": var_na,
        "var_nb": var_nb,
        "mandel_q_b": mandel,
        "cross_corr": cross,
    }


def _label(spec: StateSpec) -> str:
    z = spec.eigenvalue
    return f"{spec.kind}(z={z.real:.6g}{z.imag:+.6g}j,q={spec.charge_q})"


def check_spec(spec: StateSpec) -> VerificationReport:
    """Eigen-residual, tail weight and recursion/exponential agreement for one spec."""
    report = VerificationReport()
    name = _label(spec)
    try:
        rec = build_by_recursion(spec)
        report.add(f"{name}:eigen_residual", eigen_residual(rec, spec.nonlinear_function(),
                                                            spec.effective_eigenvalue()), RESIDUAL_TOL)
        report.add(f"{name}:tail_weight", ladder.tail_weight(rec), spec.truncation.tail_tolerance)
        expo = build_by_exponential(spec)
        report.add(f"{name}:dual_construction", abs(1.0 - fidelity(rec, expo)), FIDELITY_TOL)
    except TmnlcsError as exc:
        report.add_error(name, exc)
    return report


def run_suite(spec_grid: Iterable[StateSpec]) -> VerificationReport:
    """Run :func:`check_spec` over a grid, in grid order; failures are recorded, not raised."""
    report = VerificationReport()
    for spec in spec_grid:
        report.extend(check_spec(spec))
    return report


def default_grid() -> list:
    """Catalog kinds over ``|z| in {0.1, 0.5, 1, 2}``, ``arg z in {0, pi/3}``, ``q in {0, 1, 2, 5}``."""
    grid = []
    for kind in ("pair", "perelomov", "parity_pair", "parity_perelomov"):
        for r in (0.1, 0.5, 1.0, 2.0):
            for phi in (0.0, math.pi / 3):
                for q in (0, 1, 2, 5):
                    grid.append(StateSpec(kind, r * complex(math.cos(phi), math.sin(phi)), q))
    return grid


def check_commutator_identity(f: NonlinearFunction, q: int, truncation_n: int = 12,
                              tolerance: float = 1e-12) -> VerificationReport:
    """``[f ab, h a^dag b^dag]`` acts as the identity on interior basis kets."""
    report = VerificationReport()
    for n in range(1, truncation_n - 1):
        ket = ladder.basis_state(q, n, truncation_n)
        try:
            out = commutator_action(ket, f)
            report.add(f"commutator[{f.label},q={q},n={n}]",
                       float(np.linalg.norm(out.amplitudes - ket.amplitudes)), tolerance)
        except TmnlcsError as exc:
            report.add_error(f"commutator[{f.label},q={q},n={n}]", exc)
    return report


def default_suite() -> VerificationReport:
    """Every library-level identity check on its default parameter grid."""
    report = run_suite(default_grid())

    for base in ("pair", "perelomov"):
        kind = "parity_" + base
        for z in (0.5, 1.0, 2.0):
            for q in (0, 1, 3):
                name = f"parity_superposition[{base},z={z},q={q}]"
                try:
                    direct = build_by_recursion(StateSpec(kind, z, q))
                    sup = build_parity_superposition(base, z, q)
                    report.add(name, abs(1.0 - fidelity(direct, sup)), FIDELITY_TOL)
                except TmnlcsError as exc:
                    report.add_error(name, exc)

    for z in (0.5, 1.0, 2.0):
        for q in (0, 1, 3):
            pair = build_by_recursion(StateSpec("pair", z, q))
            parity = build_by_recursion(StateSpec("parity_pair", z, q))
            evolved, _ = kerr_evolve(pair, math.pi / 2)
            report.add(f"kerr_half_pi[z={z},q={q}]", abs(1.0 - fidelity(evolved, parity)), 1e-12)
            same, _ = kerr_evolve(pair, math.pi)
            report.add(f"kerr_pi_identity[z={z},q={q}]",
                       float(np.max(np.abs(same.amplitudes - pair.amplitudes))), 1e-14)

    for fname, kind, z in (("unity", "pair", 0.8), ("perelomov_reduced", "perelomov", 0.5)):
        f = catalog(fname)
        for q in (0, 1, 2):
            spec = StateSpec(kind, z, q)
            base = build_by_recursion(spec)
            alpha = spec.effective_eigenvalue()
            for m in (0, 1, 2):
                for n in (0, 1, 2):
                    for label, op in (("add", photon_add), ("sub", photon_subtract)):
                        name = f"photon_{label}[{fname},q={q},m={m},n={n}]"
                        try:
                            out, induced, _ = op(base, f, m, n)
                            report.add(name, eigen_residual(out, induced, alpha), RESIDUAL_TOL)
                        except TmnlcsError as exc:
                            report.add_error(name, exc)

    for name in CATALOG_NAMES:
        for q in (0, 1, 2):
            report.extend(check_commutator_identity(catalog(name, q), q))

    samples = [ladder.basis_state(0, 5, 8)] + [
        build_by_recursion(StateSpec(kind, z, 0))
        for kind in ("pair", "perelomov", "parity_pair")
        for z in (0.5, 1.0)
    ]
    report.extend(check_phase_operator_equivalence(samples))
    return report
