"""Validated state types and their spectral calculus.

Classical states are probability vectors, quantum states are density
matrices.  Construction goes through :func:`validate_distribution` and
:func:`validate_density`, which reject genuinely bad inputs and clean up
roundoff-level violations (clip, then renormalize), so everything
downstream can assume well-formed states.  Re-validating an already
validated state returns it unchanged.

All matrix functions here (square root, supported logarithm, entropies)
are built on a single spectral-decomposition primitive, and entropies
are in nats throughout.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    BadRank,
    DimensionCapExceeded,
    NegativeWeight,
    NotHermitian,
    NotNormalized,
    NotPositive,
    NotUnitTrace,
    ValidationError,
)

VALIDATION_TOL = 1e-12    # type-invariant tolerance
INPUT_SUM_TOL = 1e-9      # accepted sum/trace deviation of raw input
SUPPORT_FLOOR = 1e-14     # eigenvalues at or below this count as exact zeros
DEFAULT_DIM_CAP = 4096    # cap on composite-space dimensions
DIM_CAP_ENV = "STATLEN_DIM_CAP"

# Cleanup is skipped below these thresholds, which sit above the noise of
# the cleanup itself; this is what makes validation idempotent bit for bit.
_RENORM_SKIP = 1e-13
_PSD_SKIP = 1e-14


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ProbabilityDistribution:
    """Finite probability vector: nonnegative weights summing to one."""

    weights: np.ndarray
    kind = "classical"

    @property
    def dim(self) -> int:
        return self.weights.size


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace complex matrix."""

    matrix: np.ndarray
    kind = "quantum"

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in descending order with the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True, eq=False)
class TangentPerturbation:
    """Direction on state space: zero-sum vector or traceless Hermitian matrix."""

    kind: str
    delta: np.ndarray

    @property
    def dim(self) -> int:
        return self.delta.shape[0]


def validate_distribution(raw) -> ProbabilityDistribution:
    """Check, clip, and renormalize a raw weight vector.

    Entries in [-1e-12, 0) are clipped to zero; more negative entries raise
    :class:`NegativeWeight`.  The sum must be within 1e-9 of one, and is
    renormalized only when it deviates by more than roundoff, so validated
    output passes through unchanged.
    """
    weights = np.array(raw, dtype=np.float64, copy=True)
    if weights.ndim != 1 or weights.size < 1:
        raise ValidationError(
            f"distribution must be a nonempty vector, got shape {weights.shape}"
        )
    if not np.all(np.isfinite(weights)):
        raise ValidationError("distribution contains non-finite entries")
    wmin = float(weights.min())
    if wmin < -VALIDATION_TOL:
        raise NegativeWeight(f"weight {wmin:.3e} below -{VALIDATION_TOL}")
    total = float(weights.sum())
    if abs(total - 1.0) > INPUT_SUM_TOL:
        raise NotNormalized(f"weights sum to {total!r}, expected 1 within {INPUT_SUM_TOL}")
    if wmin < 0.0:
        weights = np.clip(weights, 0.0, None)
        total = float(weights.sum())
    if abs(total - 1.0) > _RENORM_SKIP:
        weights = weights / total
    return ProbabilityDistribution(_freeze(weights))


def validate_density(raw) -> DensityMatrix:
    """Check, symmetrize, eigenvalue-clip, and trace-normalize a raw matrix.

    Hermiticity and positivity violations beyond 1e-12 and trace deviations
    beyond 1e-9 are errors; smaller ones are repaired.  As with
    distributions, already-clean matrices are returned unchanged.
    """
    mat = np.array(raw, dtype=np.complex128, copy=True)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
        raise ValidationError(f"density matrix must be square, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValidationError("density matrix contains non-finite entries")
    herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
    if herm_dev > VALIDATION_TOL:
        raise NotHermitian(f"Hermiticity deviation {herm_dev:.3e} exceeds {VALIDATION_TOL}")
    if herm_dev > 0.0:
        mat = 0.5 * (mat + mat.conj().T)
    lam, vec = np.linalg.eigh(mat)
    lam_min = float(lam[0])
    if lam_min < -VALIDATION_TOL:
        raise NotPositive(f"eigenvalue {lam_min:.3e} below -{VALIDATION_TOL}")
    trace = float(np.real(np.trace(mat)))
    if abs(trace - 1.0) > INPUT_SUM_TOL:
        raise NotUnitTrace(f"trace {trace!r}, expected 1 within {INPUT_SUM_TOL}")
    if lam_min < -_PSD_SKIP or abs(trace - 1.0) > _RENORM_SKIP:
        lam = np.clip(lam, 0.0, None)
        lam = lam / lam.sum()
        mat = (vec * lam) @ vec.conj().T
        mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(_freeze(mat))


def tangent_classical(raw) -> TangentPerturbation:
    """Zero-sum real direction on the simplex."""
    delta = np.array(raw, dtype=np.float64, copy=True)
    if delta.ndim != 1 or delta.size < 1:
        raise ValidationError(f"tangent vector must be 1-d, got shape {delta.shape}")
    total = float(delta.sum())
    if abs(total) > VALIDATION_TOL:
        raise ValidationError(f"tangent vector sums to {total!r}, expected 0")
    if total != 0.0:
        delta = delta - total / delta.size
    return TangentPerturbation("classical", _freeze(delta))


def tangent_quantum(raw) -> TangentPerturbation:
    """Traceless Hermitian direction on density matrices."""
    delta = np.array(raw, dtype=np.complex128, copy=True)
    if delta.ndim != 2 or delta.shape[0] != delta.shape[1]:
        raise ValidationError(f"tangent matrix must be square, got shape {delta.shape}")
    herm_dev = float(np.max(np.abs(delta - delta.conj().T)))
    if herm_dev > VALIDATION_TOL:
        raise ValidationError(f"tangent Hermiticity deviation {herm_dev:.3e}")
    if herm_dev > 0.0:
        delta = 0.5 * (delta + delta.conj().T)
    trace = float(np.real(np.trace(delta)))
    if abs(trace) > VALIDATION_TOL:
        raise ValidationError(f"tangent trace {trace!r}, expected 0")
    if trace != 0.0:
        delta = delta - (trace / delta.shape[0]) * np.eye(delta.shape[0])
    return TangentPerturbation("quantum", _freeze(delta))


def spectral(rho) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    lam, vec = np.linalg.eigh(mat)
    return SpectralDecomposition(
        _freeze(lam[::-1].copy()), _freeze(vec[:, ::-1].copy())
    )


def mat_sqrt(rho) -> np.ndarray:
    """Hermitian PSD square root, with eigenvalues clipped at zero."""
    dec = spectral(rho)
    root = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
    out = (dec.eigenvectors * root) @ dec.eigenvectors.conj().T
    return 0.5 * (out + out.conj().T)


def mat_log_on_support(rho, floor: float = SUPPORT_FLOOR):
    """Matrix logarithm restricted to eigenvalues above ``floor``.

    Returns ``(log_matrix, support_projector)``; the projector lets callers
    measure how much of another state lives outside the support.
    """
    dec = spectral(rho)
    keep = dec.eigenvalues > floor
    vecs = dec.eigenvectors[:, keep]
    log_mat = (vecs * np.log(dec.eigenvalues[keep])) @ vecs.conj().T
    projector = vecs @ vecs.conj().T
    return (
        0.5 * (log_mat + log_mat.conj().T),
        0.5 * (projector + projector.conj().T),
    )


def _entropy_of_weights(weights: np.ndarray, floor: float) -> float:
    kept = weights[weights > floor]
    if kept.size == 0:
        return 0.0
    return max(0.0, float(-np.sum(kept * np.log(kept))))


def von_neumann_entropy(rho, floor: float = SUPPORT_FLOOR) -> float:
    """S(rho) = -sum_i lam_i ln lam_i in nats; lies in [0, ln d]."""
    return _entropy_of_weights(spectral(rho).eigenvalues, floor)


def shannon_entropy(p: ProbabilityDistribution, floor: float = SUPPORT_FLOOR) -> float:
    """H(p) = -sum_a p_a ln p_a in nats."""
    return _entropy_of_weights(p.weights, floor)


def dimension_cap() -> int:
    """Composite-space dimension cap, overridable via STATLEN_DIM_CAP."""
    raw = os.environ.get(DIM_CAP_ENV)
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(f"{DIM_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValidationError(f"{DIM_CAP_ENV} must be positive, got {cap}")
    return cap


def _check_cap(dim: int, cap) -> None:
    limit = dimension_cap() if cap is None else int(cap)
    if dim > limit:
        raise DimensionCapExceeded(f"composite dimension {dim} exceeds cap {limit}")


def tensor_product(a, b, cap=None):
    """Kronecker product of two states of the same kind."""
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        _check_cap(a.dim * b.dim, cap)
        return DensityMatrix(_freeze(np.kron(a.matrix, b.matrix)))
    if isinstance(a, ProbabilityDistribution) and isinstance(b, ProbabilityDistribution):
        _check_cap(a.dim * b.dim, cap)
        return ProbabilityDistribution(_freeze(np.kron(a.weights, b.weights)))
    raise ValidationError("tensor_product needs two states of the same kind")


def random_state(dim: int, rank: int, seed: int) -> DensityMatrix:
    """Seeded random density matrix G G* / tr(G G*) of the requested rank.

    G is a ``dim x rank`` matrix of complex normal deviates from
    ``numpy.random.default_rng(seed)``, so results are reproducible.
    """
    if not 1 <= rank <= dim:
        raise BadRank(f"rank must lie in 1..{dim}, got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    mat = g @ g.conj().T
    mat /= np.real(np.trace(mat))
    return validate_density(mat)


def random_distribution(dim: int, seed: int) -> ProbabilityDistribution:
    """Seeded random full-support distribution |g|^2 / sum |g|^2."""
    if dim < 1:
        raise ValidationError(f"dim must be positive, got {dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    w = np.abs(g) ** 2
    return validate_distribution(w / w.sum())


def add_ridge(state, delta: float):
    """Mix a state with the maximally mixed one: (state + delta*I/d)/(1 + delta)."""
    if delta < 0.0:
        raise ValidationError(f"ridge must be nonnegative, got {delta}")
    if delta == 0.0:
        return state
    if isinstance(state, DensityMatrix):
        mat = (state.matrix + (delta / state.dim) * np.eye(state.dim)) / (1.0 + delta)
        return validate_density(mat)
    if isinstance(state, ProbabilityDistribution):
        return validate_distribution((state.weights + delta / state.dim) / (1.0 + delta))
    raise ValidationError(f"cannot ridge object of type {type(state).__name__}")
