"""Reference-line tap analysis: branch operators, probabilities, leakage.

A tap on the reference is a measurement family inserted between resource
preparation and the Bell measurement.  Every question about it reduces to
the branch operators ``P(l, m)``, which act on the input alone.  The
probabilities predicted here must agree with the oracle records produced
by `teleportsim.engine.run_oracle`; the verification suite enforces that.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .bell import BellFamily, Label, find_outcome
from .effects import MeasurementFamily
from .engine import NULL_BRANCH_EPS, ScenarioConfig
from .linalg import (
    dagger,
    frozen_complex_array,
    hermiticity_deviation,
    transpose_in_basis,
)


class NullBranchError(ValueError):
    """Raised when asking for the state of a probability-zero branch."""


@dataclass(frozen=True, eq=False)
class EavesdropEntry:
    """One ``(l, m)`` cell: operator, probability, conditional fidelity.

    ``fidelity`` is ``None`` on a branch that never fires; there is no
    state there to compare with.
    """

    l: int | str
    m: Label
    operator: np.ndarray
    probability: float
    fidelity: float | None
    hermiticity_deviation: float


@dataclass(frozen=True, eq=False)
class EavesdropReport:
    """Full tap analysis for one scenario."""

    entries: tuple[EavesdropEntry, ...]
    p_l: dict[int | str, float]
    p_m: dict[Label, float]
    total_fidelity: float
    max_hermiticity_deviation: float


@dataclass(frozen=True)
class DecompositionReport:
    """Deviations of the two receiver-state decompositions from ``1/dim``."""

    branch_deviation: float
    grouped_deviation: float


@dataclass(frozen=True, eq=False)
class ProjectiveReport:
    """Projective-tap reduction: eigenstates, observables, probabilities."""

    mirror_eigenstates: np.ndarray  # columns indexed by branch
    observables: dict[Label, np.ndarray]
    probabilities: dict[tuple[int | str, Label], float]


def _tap_family(config: ScenarioConfig) -> MeasurementFamily:
    if not isinstance(config.effect_r, MeasurementFamily):
        raise ValueError("scenario has no measurement family on the reference line")
    return config.effect_r


def eavesdrop_operator(config: ScenarioConfig, l: int | str, m: Label) -> np.ndarray:
    """Branch operator ``sqrt(w)/dim U(m) (u0^-1 E(l) u0)^T U(m)^-1``."""
    family = _tap_family(config)
    branch = next((b for b in family.branches if b.label == l), None)
    if branch is None:
        raise ValueError(f"no tap branch labeled {l!r}")
    outcome = find_outcome(config.bell, m)
    u0 = np.asarray(config.u0)
    mirrored = transpose_in_basis(dagger(u0) @ np.asarray(branch.matrix) @ u0)
    u_m = np.asarray(outcome.unitary)
    return (np.sqrt(outcome.weight) / config.dim) * (u_m @ mirrored @ dagger(u_m))


def joint_probability(config: ScenarioConfig, l: int | str, m: Label) -> float:
    """Probability ``<psi|P(l,m)^2|psi>`` of tap result ``l`` with Bell result ``m``."""
    op = eavesdrop_operator(config, l, m)
    psi = np.asarray(config.input_state)
    return float(np.vdot(psi, op @ (op @ psi)).real)


def conditional_output(config: ScenarioConfig, l: int | str, m: Label) -> np.ndarray:
    """Corrected receiver state ``P(l,m)|psi> / sqrt(p)`` for one branch."""
    op = eavesdrop_operator(config, l, m)
    psi = np.asarray(config.input_state)
    amp = op @ psi
    probability = float(np.vdot(amp, amp).real)
    if probability < NULL_BRANCH_EPS:
        raise NullBranchError(f"branch (l={l!r}, m={m!r}) has probability {probability:.3e}")
    return amp / np.sqrt(probability)


def conditional_fidelity(config: ScenarioConfig, l: int | str, m: Label) -> float:
    """Fidelity ``|<psi|P(l,m)|psi>|^2 / p(l,m)`` of one branch output."""
    op = eavesdrop_operator(config, l, m)
    psi = np.asarray(config.input_state)
    amp = op @ psi
    probability = float(np.vdot(amp, amp).real)
    if probability < NULL_BRANCH_EPS:
        raise NullBranchError(f"branch (l={l!r}, m={m!r}) has probability {probability:.3e}")
    return float(abs(np.vdot(psi, amp)) ** 2) / probability


def total_fidelity(config: ScenarioConfig) -> float:
    """Average teleportation fidelity ``sum_lm |<psi|P(l,m)|psi>|^2``.

    Null branches contribute nothing, so the sum runs over everything.
    """
    family = _tap_family(config)
    psi = np.asarray(config.input_state)
    total = 0.0
    for branch in family.branches:
        for outcome in config.bell.outcomes:
            op = eavesdrop_operator(config, branch.label, outcome.label)
            total += float(abs(np.vdot(psi, op @ psi)) ** 2)
    return total


def joint_probability_table(config: ScenarioConfig) -> dict[tuple[int | str, Label], float]:
    """All joint probabilities keyed by ``(l, m)``, tap label major."""
    family = _tap_family(config)
    table: dict[tuple[int | str, Label], float] = {}
    for branch in family.branches:
        for outcome in config.bell.outcomes:
            table[(branch.label, outcome.label)] = joint_probability(
                config, branch.label, outcome.label
            )
    return table


def marginal_l(config: ScenarioConfig) -> dict[int | str, float]:
    """Tap-result distribution ``p(l)``; input-independent for any family."""
    family = _tap_family(config)
    table = joint_probability_table(config)
    return {
        branch.label: sum(
            table[(branch.label, outcome.label)] for outcome in config.bell.outcomes
        )
        for branch in family.branches
    }


def marginal_m(config: ScenarioConfig) -> dict[Label, float]:
    """Bell-result distribution ``p(m)``; equals ``w(m)/dim^2`` regardless of tap."""
    family = _tap_family(config)
    table = joint_probability_table(config)
    return {
        outcome.label: sum(
            table[(branch.label, outcome.label)] for branch in family.branches
        )
        for outcome in config.bell.outcomes
    }


def expected_marginal_l(config: ScenarioConfig) -> dict[int | str, float]:
    """Closed-form tap marginal ``tr(E(l)^2) / dim``."""
    family = _tap_family(config)
    return {
        b.label: float(np.trace(np.asarray(b.matrix) @ np.asarray(b.matrix)).real) / config.dim
        for b in family.branches
    }


def analyze_eavesdropping(config: ScenarioConfig) -> EavesdropReport:
    """Build the full per-branch report for one tapped scenario."""
    family = _tap_family(config)
    psi = np.asarray(config.input_state)
    entries: list[EavesdropEntry] = []
    p_l: dict[int | str, float] = {b.label: 0.0 for b in family.branches}
    p_m: dict[Label, float] = {o.label: 0.0 for o in config.bell.outcomes}
    fid_total = 0.0
    worst_herm = 0.0
    for branch in family.branches:
        for outcome in config.bell.outcomes:
            op = eavesdrop_operator(config, branch.label, outcome.label)
            herm = hermiticity_deviation(op)
            worst_herm = max(worst_herm, herm)
            amp = op @ psi
            probability = float(np.vdot(amp, amp).real)
            overlap_sq = float(abs(np.vdot(psi, amp)) ** 2)
            fid_total += overlap_sq
            fidelity = None if probability < NULL_BRANCH_EPS else overlap_sq / probability
            p_l[branch.label] += probability
            p_m[outcome.label] += probability
            entries.append(
                EavesdropEntry(
                    l=branch.label,
                    m=outcome.label,
                    operator=frozen_complex_array(op),
                    probability=probability,
                    fidelity=fidelity,
                    hermiticity_deviation=herm,
                )
            )
    return EavesdropReport(
        entries=tuple(entries),
        p_l=p_l,
        p_m=p_m,
        total_fidelity=fid_total,
        max_hermiticity_deviation=worst_herm,
    )


def sequential_decomposition_check(config: ScenarioConfig) -> DecompositionReport:
    """Deviation of both unconditional receiver-state decompositions.

    The branch form sums ``U(m)^-1 P |psi><psi| P^+ U(m)`` over every
    ``(l, m)``; the grouped form first averages the Bell outcomes away and
    sandwiches ``1/dim`` between the mirrored tap operators.  Both must
    return the maximally mixed state; otherwise the tap would signal.
    """
    family = _tap_family(config)
    dim = config.dim
    psi = np.asarray(config.input_state)
    u0 = np.asarray(config.u0)
    target = np.eye(dim) / dim
    branch_sum = np.zeros((dim, dim), dtype=complex)
    for branch in family.branches:
        for outcome in config.bell.outcomes:
            op = eavesdrop_operator(config, branch.label, outcome.label)
            vec = dagger(np.asarray(outcome.unitary)) @ (op @ psi)
            branch_sum += np.outer(vec, vec.conj())
    grouped_sum = np.zeros((dim, dim), dtype=complex)
    for branch in family.branches:
        mirrored = transpose_in_basis(dagger(u0) @ np.asarray(branch.matrix) @ u0)
        grouped_sum += mirrored @ target @ mirrored
    return DecompositionReport(
        branch_deviation=float(np.max(np.abs(branch_sum - target))),
        grouped_deviation=float(np.max(np.abs(grouped_sum - target))),
    )


def projective_case_analysis(config: ScenarioConfig) -> ProjectiveReport:
    """Specialize the tap to rank-one projectors.

    Each branch must satisfy ``E^2 = E`` with unit trace; the tap then
    amounts to measuring, per Bell outcome ``m``, the receiver observable
    ``U(m) L U(m)^-1`` where ``L`` has the mirrored eigenstates.  Joint
    probabilities reduce to squared overlaps with those eigenstates.
    """
    family = _tap_family(config)
    dim = config.dim
    psi = np.asarray(config.input_state)
    u0 = np.asarray(config.u0)
    eigenstates = np.zeros((dim, dim), dtype=complex)
    for column, branch in enumerate(family.branches):
        mat = np.asarray(branch.matrix)
        idempotency = float(np.max(np.abs(mat @ mat - mat)))
        trace = float(np.trace(mat).real)
        if idempotency > 1e-9 or abs(trace - 1.0) > 1e-9:
            raise ValueError(
                f"branch {branch.label!r} is not a rank-one projector "
                f"(idempotency {idempotency:.3e}, trace {trace:.6f})"
            )
        # the projector's range vector, phase-anchored on its largest entry
        eigvals, eigvecs = np.linalg.eigh((mat + mat.conj().T) / 2)
        vec = eigvecs[:, int(np.argmax(eigvals))]
        mirrored_vec = (dagger(u0) @ vec).conj()
        anchor = int(np.argmax(np.abs(mirrored_vec)))
        phase = mirrored_vec[anchor] / abs(mirrored_vec[anchor])
        eigenstates[:, column] = mirrored_vec / phase
    weights = np.arange(dim, dtype=float)
    base_observable = (eigenstates * weights) @ eigenstates.conj().T
    observables: dict[Label, np.ndarray] = {}
    probabilities: dict[tuple[int | str, Label], float] = {}
    for outcome in config.bell.outcomes:
        u_m = np.asarray(outcome.unitary)
        observables[outcome.label] = frozen_complex_array(u_m @ base_observable @ dagger(u_m))
        back = dagger(u_m) @ psi
        for column, branch in enumerate(family.branches):
            overlap = np.vdot(eigenstates[:, column], back)
            probabilities[(branch.label, outcome.label)] = float(
                (outcome.weight / dim**2) * abs(overlap) ** 2
            )
    return ProjectiveReport(
        mirror_eigenstates=frozen_complex_array(eigenstates),
        observables=observables,
        probabilities=probabilities,
    )


def distinguishability(config: ScenarioConfig, inputs: list[np.ndarray]) -> np.ndarray:
    """Pairwise leakage between candidate inputs, as guessing advantage.

    Entry ``(i, j)`` is the advantage over a fair coin when identifying
    which of two equiprobable inputs produced one joint ``(l, m)`` sample:
    half the total-variation distance between the probability tables.
    """
    if len(inputs) < 2:
        raise ValueError("need at least two candidate inputs to compare")
    tables = []
    for state in inputs:
        probe = replace(config, input_state=frozen_complex_array(state))
        table = joint_probability_table(probe)
        tables.append(np.array(list(table.values())))
    count = len(tables)
    out = np.zeros((count, count))
    for i in range(count):
        for j in range(i + 1, count):
            advantage = 0.25 * float(np.sum(np.abs(tables[i] - tables[j])))
            out[i, j] = out[j, i] = advantage
    return out
