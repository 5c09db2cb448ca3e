"""Teleportation engine: exact tripartite evolution and its operator shortcut.

Two independent routes produce every conditional output.  `run_oracle`
evolves the full A x R x B state and projects each Bell outcome; it is
the ground truth and stays within the design envelope (dim <= 32, so at
most 32**3 amplitudes).  `fast_run` applies the per-outcome transfer
operator on the input alone.  Agreement between the two is a standing
invariant checked by the verification suite.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bell import BellFamily, Label, bell_outcome_state, find_outcome, make_bell_family
from .effects import EffectOperator, MeasurementFamily, effect_branches
from .linalg import (
    as_complex_matrix,
    as_pure_state,
    dagger,
    frozen_complex_array,
    is_unitary,
    transpose_in_basis,
)

NULL_BRANCH_EPS = 1e-14

EffectSpec = EffectOperator | MeasurementFamily | Sequence[EffectOperator] | None


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """One teleportation scenario, fully specified.

    ``effect_r`` disturbs the reference line between resource preparation
    and the Bell measurement; ``effect_b`` disturbs the receiver line.
    With ``apply_correction`` the receiver undoes the outcome unitary, so
    an undisturbed scenario returns the input exactly.  ``label_b_branches``
    controls whether receiver-side branch labels survive into records.
    """

    dim: int
    input_state: np.ndarray
    bell: BellFamily
    u0: np.ndarray
    effect_r: EffectSpec = None
    effect_b: EffectSpec = None
    apply_correction: bool = True
    label_b_branches: bool = True


@dataclass(frozen=True, eq=False)
class TeleportRecord:
    """One conditional branch: labels, probability and output amplitudes.

    ``raw_output`` keeps the unnormalized amplitudes (norm^2 equals the
    probability).  ``output`` is the normalized state, or ``None`` for a
    branch whose probability is numerically zero; such branches are kept
    so probability tables stay complete.
    """

    m: Label
    l: int | str | None
    branch: int | str | None
    probability: float
    raw_output: np.ndarray
    output: np.ndarray | None


def make_scenario(
    dim: int,
    input_state: np.ndarray,
    bell: BellFamily | None = None,
    u0: np.ndarray | None = None,
    effect_r: EffectSpec = None,
    effect_b: EffectSpec = None,
    apply_correction: bool = True,
    label_b_branches: bool = True,
) -> ScenarioConfig:
    """Validate and assemble a scenario; every part must share ``dim``."""
    if dim < 2:
        raise ValueError(f"dimension must be at least 2, got {dim}")
    state = as_pure_state(input_state)
    if state.shape[0] != dim:
        raise ValueError(f"input state dimension {state.shape[0]} does not match {dim}")
    if bell is None:
        bell = make_bell_family(dim)
    elif bell.dim != dim:
        raise ValueError(f"Bell family dimension {bell.dim} does not match {dim}")
    if u0 is None:
        u0 = np.eye(dim, dtype=complex)
    u0 = as_complex_matrix(u0)
    if u0.shape != (dim, dim):
        raise ValueError(f"u0 shape {u0.shape} does not match dimension {dim}")
    if not is_unitary(u0):
        raise ValueError("u0 must be unitary")
    # expansion validates shapes and closure of both effect specifications
    effect_branches(effect_r, dim)
    effect_branches(effect_b, dim)
    return ScenarioConfig(
        dim=dim,
        input_state=frozen_complex_array(state),
        bell=bell,
        u0=frozen_complex_array(u0),
        effect_r=effect_r,
        effect_b=effect_b,
        apply_correction=apply_correction,
        label_b_branches=label_b_branches,
    )


def _branch_label_b(config: ScenarioConfig, label: int | str | None) -> int | str | None:
    if not config.label_b_branches:
        return None
    return label


def run_oracle(config: ScenarioConfig) -> list[TeleportRecord]:
    """Evolve the full tripartite state and project every Bell outcome.

    Branch order is reference effect, then receiver effect, then Bell
    label, matching `fast_run` record for record.
    """
    dim = config.dim
    psi = np.asarray(config.input_state)
    resource_mat = np.asarray(config.u0) / np.sqrt(dim)  # R x B amplitudes as a matrix
    records: list[TeleportRecord] = []
    for l_label, e_r in effect_branches(config.effect_r, dim):
        for b_label, f_b in effect_branches(config.effect_b, dim):
            # (E_R (x) F_B) acting on the resource, still as an R x B matrix
            disturbed = e_r @ resource_mat @ f_b.T
            full = np.kron(psi, disturbed.reshape(-1)).reshape(dim, dim, dim)
            for outcome in config.bell.outcomes:
                proj = bell_outcome_state(config.bell, outcome.label, config.u0)
                amp = np.einsum("ij,ijk->k", proj.conj().reshape(dim, dim), full)
                if config.apply_correction:
                    amp = outcome.unitary @ amp
                records.append(
                    _record(outcome.label, l_label, _branch_label_b(config, b_label), amp)
                )
    return records


def transfer_operator(
    config: ScenarioConfig,
    m: Label,
    l: int | str | None = None,
    branch: int | str | None = None,
) -> np.ndarray:
    """Conditional output operator for Bell outcome ``m``.

    Equals ``sqrt(w/dim) U(m) F_B (u0^-1 E_R u0)^T U(m)^-1``; applied to
    the input it reproduces the corrected oracle amplitudes exactly.  The
    reference effect enters through its mirror transpose even though it
    may act after the receiver effect in lab time.
    """
    dim = config.dim
    outcome = find_outcome(config.bell, m)
    e_r = _select_branch(config.effect_r, l, dim, "reference")
    f_b = _select_branch(config.effect_b, branch, dim, "receiver")
    u0 = np.asarray(config.u0)
    u_m = np.asarray(outcome.unitary)
    mirrored = transpose_in_basis(dagger(u0) @ e_r @ u0)
    return (np.sqrt(outcome.weight) / dim) * (u_m @ f_b @ mirrored @ dagger(u_m))


def fast_run(config: ScenarioConfig) -> list[TeleportRecord]:
    """Produce the same records as `run_oracle` via transfer operators."""
    dim = config.dim
    psi = np.asarray(config.input_state)
    u0 = np.asarray(config.u0)
    records: list[TeleportRecord] = []
    for l_label, e_r in effect_branches(config.effect_r, dim):
        mirrored = transpose_in_basis(dagger(u0) @ e_r @ u0)
        for b_label, f_b in effect_branches(config.effect_b, dim):
            core = f_b @ mirrored
            for outcome in config.bell.outcomes:
                u_m = np.asarray(outcome.unitary)
                amp = (np.sqrt(outcome.weight) / dim) * (u_m @ (core @ (dagger(u_m) @ psi)))
                if not config.apply_correction:
                    amp = dagger(u_m) @ amp
                records.append(
                    _record(outcome.label, l_label, _branch_label_b(config, b_label), amp)
                )
    return records


def ideal_decomposition_check(config: ScenarioConfig) -> float:
    """Deviation of ``sum_m (w/dim^2) U(m)^-1 |psi><psi| U(m)`` from ``1/dim``.

    This is the unconditional receiver state before any correction; for a
    complete family it is maximally mixed whatever the input, which is what
    forbids signalling through the resource alone.
    """
    dim = config.dim
    psi = np.asarray(config.input_state)
    total = np.zeros((dim, dim), dtype=complex)
    for outcome in config.bell.outcomes:
        back = dagger(outcome.unitary) @ psi
        total += (outcome.weight / dim**2) * np.outer(back, back.conj())
    return float(np.max(np.abs(total - np.eye(dim) / dim)))


def _record(
    m: Label, l: int | str | None, branch: int | str | None, amp: np.ndarray
) -> TeleportRecord:
    probability = float(np.vdot(amp, amp).real)
    if probability < NULL_BRANCH_EPS:
        output = None
    else:
        output = frozen_complex_array(amp / np.sqrt(probability))
    return TeleportRecord(
        m=m,
        l=l,
        branch=branch,
        probability=probability,
        raw_output=frozen_complex_array(amp),
        output=output,
    )


def _select_branch(
    effect: EffectSpec, label: int | str | None, dim: int, side: str
) -> np.ndarray:
    branches = effect_branches(effect, dim)
    if label is None:
        if len(branches) != 1:
            raise ValueError(f"{side} effect has {len(branches)} branches; a label is required")
        return branches[0][1]
    for have, mat in branches:
        if have == label:
            return mat
    raise ValueError(f"no {side} branch labeled {label!r}")
