"""Channel effect operators: unitaries, Kraus mixtures, measurement families.

An effect is anything inserted on the reference or receiver line of the
shared resource.  Measurement families model a tap of tunable strength;
their branches are Hermitian PSD operators whose squares sum to identity,
so branch probabilities close without renormalization.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    as_complex_matrix,
    dagger,
    frozen_complex_array,
    hermiticity_deviation,
    is_unitary,
)

FAMILY_TOL = 1e-9

PSD_CLAMP = 1e-10


@dataclass(frozen=True, eq=False)
class EffectOperator:
    """A single branch operator with its role and an optional label."""

    matrix: np.ndarray
    kind: str  # "unitary" | "measurement-branch" | "generic"
    label: int | str | None = None


@dataclass(frozen=True, eq=False)
class MeasurementFamily:
    """Minimal back-action measurement: branches ``E(l)`` with ``sum E^2 = 1``.

    Built through `make_measurement_family` or `strength_family`, both of
    which enforce Hermiticity, positivity and completeness.  Direct
    construction bypasses the checks (used by the verification suite to
    exercise its own failure path).
    """

    dim: int
    branches: tuple[EffectOperator, ...]


@dataclass(frozen=True)
class FamilyReport:
    """Numerical health check of a measurement family."""

    completeness_deviation: float
    branch_hermiticity: tuple[float, ...]
    branch_min_eigenvalue: tuple[float, ...]
    passed: bool


def unitary_effect(matrix: np.ndarray, label: int | str | None = None) -> EffectOperator:
    """Wrap a unitary as a single-branch channel effect."""
    matrix = as_complex_matrix(matrix)
    if not is_unitary(matrix):
        raise ValueError("effect matrix is not unitary")
    return EffectOperator(matrix=frozen_complex_array(matrix), kind="unitary", label=label)


def kraus_mixture(matrices: Sequence[np.ndarray]) -> tuple[EffectOperator, ...]:
    """Wrap a Kraus decomposition as labeled generic branches.

    Requires ``sum_k K_k^+ K_k = 1`` so that branch probabilities sum to
    one for every input.
    """
    if len(matrices) == 0:
        raise ValueError("Kraus list must not be empty")
    mats = [as_complex_matrix(m) for m in matrices]
    dim = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape != (dim, dim):
            raise ValueError(f"Kraus operator {i} has shape {m.shape}, expected ({dim}, {dim})")
    closure = sum(dagger(m) @ m for m in mats)
    deviation = float(np.max(np.abs(closure - np.eye(dim))))
    if deviation > FAMILY_TOL:
        raise ValueError(
            f"Kraus operators do not resolve the identity: deviation {deviation:.3e}"
        )
    return tuple(
        EffectOperator(matrix=frozen_complex_array(m), kind="generic", label=i)
        for i, m in enumerate(mats)
    )


def make_measurement_family(
    matrices: Sequence[np.ndarray],
    labels: Sequence[int | str] | None = None,
    tol: float = FAMILY_TOL,
) -> MeasurementFamily:
    """Admit explicit branch operators ``E(l)`` as a measurement family."""
    if len(matrices) == 0:
        raise ValueError("measurement family must have at least one branch")
    mats = [as_complex_matrix(m) for m in matrices]
    dim = mats[0].shape[0]
    if labels is None:
        labels = list(range(len(mats)))
    if len(labels) != len(mats):
        raise ValueError(f"{len(labels)} labels for {len(mats)} branches")
    branches = []
    for label, mat in zip(labels, mats):
        if mat.shape != (dim, dim):
            raise ValueError(f"branch {label!r} has shape {mat.shape}, expected ({dim}, {dim})")
        herm = hermiticity_deviation(mat)
        if herm > tol:
            raise ValueError(f"branch {label!r} is not Hermitian (deviation {herm:.3e})")
        min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2).min())
        if min_eig < -PSD_CLAMP:
            raise ValueError(
                f"branch {label!r} is not positive semidefinite (eigenvalue {min_eig:.3e})"
            )
        branches.append(
            EffectOperator(matrix=frozen_complex_array(mat), kind="measurement-branch", label=label)
        )
    family = MeasurementFamily(dim=dim, branches=tuple(branches))
    deviation = family_completeness_deviation(family)
    if deviation > tol:
        raise ValueError(
            f"branch squares do not sum to identity: deviation {deviation:.3e} exceeds {tol:.1e}"
        )
    return family


def strength_family(
    dim: int, theta: float, basis: np.ndarray | None = None
) -> MeasurementFamily:
    """Interpolating tap family ``E(l) = sqrt((1-theta)/dim + theta |b_l><b_l|)``.

    ``theta = 0`` is the trivial tap (every branch ``1/sqrt(dim)``),
    ``theta = 1`` the projective measurement onto the basis ``b_l``.  The
    basis is given as a unitary whose columns are the measurement vectors
    and defaults to the computational basis.  All branches commute.
    """
    if dim < 2:
        raise ValueError(f"dimension must be at least 2, got {dim}")
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"strength theta must lie in [0, 1], got {theta}")
    if basis is None:
        basis = np.eye(dim, dtype=complex)
    basis = as_complex_matrix(basis)
    if basis.shape != (dim, dim):
        raise ValueError(f"basis shape {basis.shape} does not match dimension {dim}")
    if not is_unitary(basis):
        raise ValueError("basis columns must form a unitary matrix")
    low = np.sqrt((1.0 - theta) / dim)
    high = np.sqrt((1.0 - theta) / dim + theta)
    eye = np.eye(dim, dtype=complex)
    branches = []
    for l in range(dim):
        proj = np.outer(basis[:, l], basis[:, l].conj())
        # closed-form Hermitian root: the argument has eigenvalue
        # (1-theta)/dim off the basis vector and (1-theta)/dim + theta on it
        mat = low * (eye - proj) + high * proj
        branches.append(
            EffectOperator(matrix=frozen_complex_array(mat), kind="measurement-branch", label=l)
        )
    return MeasurementFamily(dim=dim, branches=tuple(branches))


def family_completeness_deviation(family: MeasurementFamily) -> float:
    """Largest entrywise deviation of ``sum_l E(l)^2`` from identity."""
    total = np.zeros((family.dim, family.dim), dtype=complex)
    for branch in family.branches:
        total += branch.matrix @ branch.matrix
    return float(np.max(np.abs(total - np.eye(family.dim))))


def validate_family(family: MeasurementFamily, tol: float = FAMILY_TOL) -> FamilyReport:
    """Re-measure the family invariants without raising."""
    herm = tuple(hermiticity_deviation(b.matrix) for b in family.branches)
    min_eigs = tuple(
        float(np.linalg.eigvalsh((b.matrix + b.matrix.conj().T) / 2).min())
        for b in family.branches
    )
    completeness = family_completeness_deviation(family)
    passed = (
        completeness <= tol
        and all(h <= tol for h in herm)
        and all(e >= -PSD_CLAMP for e in min_eigs)
    )
    return FamilyReport(
        completeness_deviation=completeness,
        branch_hermiticity=herm,
        branch_min_eigenvalue=min_eigs,
        passed=passed,
    )


def effect_branches(
    effect: EffectOperator | MeasurementFamily | Sequence[EffectOperator] | None,
    dim: int,
) -> list[tuple[int | str | None, np.ndarray]]:
    """Expand any effect specification into ``(label, matrix)`` branches.

    ``None`` means an undisturbed line and expands to one identity branch
    with no label.
    """
    if effect is None:
        return [(None, np.eye(dim, dtype=complex))]
    if isinstance(effect, MeasurementFamily):
        if effect.dim != dim:
            raise ValueError(f"measurement family dimension {effect.dim} does not match {dim}")
        return [(b.label, np.asarray(b.matrix)) for b in effect.branches]
    if isinstance(effect, EffectOperator):
        mat = np.asarray(effect.matrix)
        if mat.shape != (dim, dim):
            raise ValueError(f"effect shape {mat.shape} does not match dimension {dim}")
        return [(effect.label, mat)]
    branches = list(effect)
    if not branches:
        raise ValueError("effect branch list must not be empty")
    out = []
    for i, branch in enumerate(branches):
        mat = np.asarray(branch.matrix)
        if mat.shape != (dim, dim):
            raise ValueError(f"branch {i} shape {mat.shape} does not match dimension {dim}")
        out.append((branch.label if branch.label is not None else i, mat))
    return out


def iterate_labels(effects: Iterable[EffectOperator]) -> list[int | str | None]:
    """Labels of a branch sequence in declaration order."""
    return [e.label for e in effects]
