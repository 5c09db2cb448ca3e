"""Independent brute-force reference implementations for the tests.

Everything here is written with explicit index loops on purpose: the
point is to check the package against arithmetic that shares none of its
code paths (no kron, no einsum, no reshape tricks).
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import sqrtm


def kron_indexed(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product via explicit index arithmetic, a on the slow index."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def brute_partial_trace(rho: np.ndarray, dims: tuple[int, ...], keep: int) -> np.ndarray:
    """Partial trace via explicit multi-index enumeration."""
    d_keep = dims[keep]
    out = np.zeros((d_keep, d_keep), dtype=complex)
    all_indices = list(np.ndindex(*dims))

    def flatten(idx: tuple[int, ...]) -> int:
        flat = 0
        for d, i in zip(dims, idx):
            flat = flat * d + i
        return flat

    for row in all_indices:
        for col in all_indices:
            if all(row[s] == col[s] for s in range(len(dims)) if s != keep):
                out[row[keep], col[keep]] += rho[flatten(row), flatten(col)]
    return out


def brute_teleport(
    n: int,
    psi: np.ndarray,
    u0: np.ndarray,
    e_r: np.ndarray,
    f_b: np.ndarray,
    u_m: np.ndarray,
    weight: float = 1.0,
    correct: bool = True,
) -> np.ndarray:
    """One conditional branch amplitude, from first principles.

    Builds the A x R x B state entry by entry, applies the line effects,
    projects the weighted Bell outcome on A x R and optionally applies the
    outcome unitary on what is left.
    """
    full = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                # resource amplitude before effects: u0[j, src] delta(src, k)
                full[i, j, k] = psi[i] * u0[j, k] / np.sqrt(n)
    disturbed = np.zeros_like(full)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = 0.0 + 0.0j
                for jj in range(n):
                    for kk in range(n):
                        acc += e_r[j, jj] * f_b[k, kk] * full[i, jj, kk]
                disturbed[i, j, k] = acc
    # Bell outcome amplitudes on A x R: sqrt(w/n) (u_m @ u0.T)[i, j]
    amp = np.zeros(n, dtype=complex)
    for k in range(n):
        acc = 0.0 + 0.0j
        for i in range(n):
            for j in range(n):
                proj = 0.0 + 0.0j
                for src in range(n):
                    proj += u_m[i, src] * u0[j, src]
                acc += np.conj(np.sqrt(weight / n) * proj) * disturbed[i, j, k]
        amp[k] = acc
    if correct:
        amp = u_m @ amp
    return amp


def brute_strength_branch(n: int, theta: float, l: int, basis: np.ndarray | None = None) -> np.ndarray:
    """Tap branch operator via a general-purpose matrix square root.

    The target is Hermitian by definition, so the anti-Hermitian part of
    the sqrtm output is pure numerical noise and gets dropped.  At
    theta = 1 the argument is singular and sqrtm is only accurate to
    about sqrt(machine epsilon); comparisons should budget for that.
    """
    if basis is None:
        basis = np.eye(n, dtype=complex)
    vec = basis[:, l]
    argument = (1.0 - theta) / n * np.eye(n, dtype=complex) + theta * np.outer(vec, vec.conj())
    root = np.asarray(sqrtm(argument), dtype=complex)
    return (root + root.conj().T) / 2.0


def brute_weyl(n: int, a: int, b: int) -> np.ndarray:
    """Shift-phase unitary via repeated single-step matrix products."""
    shift = np.zeros((n, n), dtype=complex)
    for k in range(n):
        shift[(k + 1) % n, k] = 1.0
    clock = np.zeros((n, n), dtype=complex)
    for k in range(n):
        clock[k, k] = np.exp(2j * np.pi * k / n)
    out = np.eye(n, dtype=complex)
    for _ in range(a):
        out = shift @ out
    for _ in range(b):
        out = out @ clock
    return out


def closed_form_uniform_fidelity(theta: float) -> float:
    """Average fidelity of the uniform qubit input under a strength-theta tap."""
    return (1.0 + np.sqrt(max(0.0, 1.0 - theta * theta))) / 2.0
