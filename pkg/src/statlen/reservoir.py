"""Exact finite-size simulation of swap-and-twirl reservoir transport.

One transport step puts the system state rho in contact with a reservoir
of n independent copies of sigma.  A reversible swap moves rho into the
first reservoir slot, then the reservoir relaxes by a twirl: the uniform
mixture over the n possible placements of rho among the sigma copies.
The twirl is the only irreversible part, and the entropy it generates
approaches S(rho||sigma) as n grows.  Everything here is computed
exactly: densely for general states, or on probability vectors for the
commuting (diagonal) case, which reaches much larger n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionCapExceeded, DimensionMismatch
from .states import (
    DensityMatrix,
    ProbabilityDistribution,
    dimension_cap,
    shannon_entropy,
    von_neumann_entropy,
    _freeze,
)
from .transport import relative_entropy

CLASSICAL_DIM_CAP = 2 ** 20


def _max_feasible_n(dim: int, limit: int, extra_slot: bool) -> int:
    # largest n with dim**(n + extra) <= limit
    n = 0
    size = dim if extra_slot else 1
    while size * dim <= limit:
        size *= dim
        n += 1
    return n


def _check_dense_cap(dim: int, n: int, cap) -> None:
    limit = dimension_cap() if cap is None else int(cap)
    if dim ** (n + 1) > limit:
        feasible = _max_feasible_n(dim, limit, extra_slot=True)
        raise DimensionCapExceeded(
            f"composite dimension {dim}**{n + 1} exceeds cap {limit}; "
            f"largest feasible n is {feasible}",
            max_feasible=feasible,
        )


def _check_classical_cap(dim: int, n: int, cap) -> None:
    limit = CLASSICAL_DIM_CAP if cap is None else int(cap)
    if dim ** n > limit:
        feasible = _max_feasible_n(dim, limit, extra_slot=False)
        raise DimensionCapExceeded(
            f"vector dimension {dim}**{n} exceeds cap {limit}; "
            f"largest feasible n is {feasible}",
            max_feasible=feasible,
        )


def swap_state(rho: DensityMatrix, sigma: DensityMatrix, n: int, cap=None) -> DensityMatrix:
    """Composite state sigma (x) rho (x) sigma^(n-1) after the swap.

    The swap is a relabeling, so the total entropy S(rho) + n S(sigma) is
    unchanged; it sets up the reservoir state the twirl acts on.
    """
    _require_pair(rho, sigma, n)
    _check_dense_cap(rho.dim, n, cap)
    out = np.kron(sigma.matrix, rho.matrix)
    for _ in range(n - 1):
        out = np.kron(out, sigma.matrix)
    return DensityMatrix(_freeze(out))


def twirl_state(rho: DensityMatrix, sigma: DensityMatrix, n: int, cap=None) -> DensityMatrix:
    """Twirled reservoir: (1/n) sum_k sigma^(x k) (x) rho (x) sigma^(x n-k-1)."""
    _require_pair(rho, sigma, n)
    _check_dense_cap(rho.dim, n, cap)
    powers = [np.array([[1.0 + 0.0j]])]
    for _ in range(n - 1):
        powers.append(np.kron(powers[-1], sigma.matrix))
    acc = np.zeros((rho.dim ** n, rho.dim ** n), dtype=np.complex128)
    for k in range(n):
        acc += np.kron(powers[k], np.kron(rho.matrix, powers[n - k - 1]))
    acc /= n
    return DensityMatrix(_freeze(acc))


def step_entropy_production(rho: DensityMatrix, sigma: DensityMatrix, n: int, cap=None) -> float:
    """Entropy generated by the twirl: S(twirl) - S(rho) - (n-1) S(sigma).

    Equals S(twirl) - S(rho (x) sigma^(x n-1)) by additivity of the
    entropy over tensor factors.
    """
    twirled = twirl_state(rho, sigma, n, cap)
    return (
        von_neumann_entropy(twirled)
        - von_neumann_entropy(rho)
        - (n - 1) * von_neumann_entropy(sigma)
    )


def classical_step_entropy_production(
    p: ProbabilityDistribution, q: ProbabilityDistribution, n: int, cap=None
) -> float:
    """Same quantity on probability vectors, reaching much larger n.

    The twirled reservoir of diagonal states is diagonal, so it is mixed
    directly as a vector of index-placement products.
    """
    _require_pair(p, q, n)
    _check_classical_cap(p.dim, n, cap)
    powers = [np.array([1.0])]
    for _ in range(n - 1):
        powers.append(np.kron(powers[-1], q.weights))
    acc = np.zeros(p.dim ** n)
    for k in range(n):
        acc += np.kron(powers[k], np.kron(p.weights, powers[n - k - 1]))
    acc /= n
    mixed = ProbabilityDistribution(_freeze(acc))
    return (
        shannon_entropy(mixed)
        - shannon_entropy(p)
        - (n - 1) * shannon_entropy(q)
    )


def _require_pair(a, b, n: int) -> None:
    if type(a) is not type(b):
        raise DimensionMismatch("system and reservoir states must be of the same kind")
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
    if n < 1:
        raise ValueError(f"reservoir size must be positive, got {n}")


@dataclass(frozen=True, eq=False)
class ReservoirScanResult:
    """Entropy production per reservoir size, with the relative-entropy limit."""

    n_values: np.ndarray
    delta_S: np.ndarray
    reference: float
    mode: str
    gaps: np.ndarray


def convergence_scan(rho, sigma, n_max: int, cap=None) -> ReservoirScanResult:
    """Entropy production for n = 1..n_max against the S(rho||sigma) limit.

    Probability-vector inputs run in "classical-fast" mode, density
    matrices in "dense" mode.  The gap sequence |delta_S_n - S(rho||sigma)|
    is recorded as data; no convergence rate is fitted or asserted.
    """
    _require_pair(rho, sigma, n_max)
    if isinstance(rho, ProbabilityDistribution):
        mode = "classical-fast"
        step = classical_step_entropy_production
    else:
        mode = "dense"
        step = step_entropy_production
    n_values = np.arange(1, n_max + 1)
    values = np.array([step(rho, sigma, int(n), cap) for n in n_values])
    reference = relative_entropy(rho, sigma)
    if math.isinf(reference):
        gaps = np.full(values.shape, math.inf)
    else:
        gaps = np.abs(values - reference)
    return ReservoirScanResult(
        _freeze(n_values), _freeze(values), reference, mode, _freeze(gaps)
    )
