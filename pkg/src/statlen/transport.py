"""Relative entropies and the entropy accounting of sequential transport.

A single equilibration step from rho to sigma produces S(rho||sigma) of
entropy; a schedule of N steps produces the sum of its per-step yields.
For evenly spaced steps along a path of length l the total approaches
l^2/(2N), which is the bound this module exposes alongside the measured
sums.  Infinite relative entropy (a support violation) is a first-class
value here, not an exception, so callers can see which step broke.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, InfiniteYield, RankDeficient
from .geometry import (
    TransportSchedule,
    bures_element,
    fisher_element,
    kubo_mori_element,
    state_fidelity,
)
from .states import (
    SUPPORT_FLOOR,
    DensityMatrix,
    ProbabilityDistribution,
    TangentPerturbation,
    mat_log_on_support,
    spectral,
    validate_density,
    validate_distribution,
    _freeze,
)

LEAK_TOL = 1e-12   # tolerated weight outside the support of the second state
RANK_TOL = 1e-10


def relative_entropy(a, b) -> float:
    """S(a||b) in nats; +inf when a has weight outside the support of b.

    Classical inputs use the Kullback-Leibler sum, quantum inputs
    tr(rho ln rho - rho ln sigma) with the logarithm taken on the support
    of sigma.
    """
    if isinstance(a, ProbabilityDistribution) and isinstance(b, ProbabilityDistribution):
        if a.dim != b.dim:
            raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
        p, q = a.weights, b.weights
        dead = q <= SUPPORT_FLOOR
        if float(p[dead].sum()) > LEAK_TOL:
            return math.inf
        live = (p > SUPPORT_FLOOR) & ~dead
        return float(np.sum(p[live] * (np.log(p[live]) - np.log(q[live]))))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        if a.dim != b.dim:
            raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
        log_b, support = mat_log_on_support(b)
        leak = float(np.real(np.trace(a.matrix)) - np.real(np.trace(a.matrix @ support)))
        if leak > LEAK_TOL:
            return math.inf
        lam = spectral(a).eigenvalues
        lam = lam[lam > SUPPORT_FLOOR]
        return float(np.sum(lam * np.log(lam)) - np.real(np.trace(a.matrix @ log_b)))
    raise DimensionMismatch(
        f"cannot compare {type(a).__name__} with {type(b).__name__}"
    )


def single_step_yield(rho, sigma) -> float:
    """Entropy produced by one equilibration step: S(rho||sigma)."""
    return relative_entropy(rho, sigma)


def min_entropy_production(length: float, n_steps: int) -> float:
    """Minimum total entropy production along a path of the given length: l^2/(2N)."""
    if n_steps < 1:
        raise ValueError(f"need at least one step, got {n_steps}")
    return length * length / (2.0 * n_steps)


def geodesic_bound(fidelity: float, n_steps: int, kind: str) -> float:
    """Lower bound over all N-step transports between states of fidelity F.

    (2/N)(1 - F^2) for quantum states, (2/N)(arccos F)^2 for classical ones;
    these are the minimum l^2/(2N) evaluated at the geodesic lengths.
    """
    if n_steps < 1:
        raise ValueError(f"need at least one step, got {n_steps}")
    f = float(np.clip(fidelity, 0.0, 1.0))
    if kind == "quantum":
        return 2.0 * (1.0 - f * f) / n_steps
    if kind == "classical":
        angle = float(np.arccos(f))
        return 2.0 * angle * angle / n_steps
    raise ValueError(f"unknown kind {kind!r}")


def entropy_per_unit_length(nu: float) -> float:
    """Dissipation rate 1/(2 nu) in nats per unit length at step density nu."""
    if nu <= 0.0:
        raise ValueError(f"step density must be positive, got {nu}")
    return 1.0 / (2.0 * nu)


@dataclass(frozen=True, eq=False)
class TransportReport:
    """Entropy accounting for one executed transport schedule.

    ``nu`` is the number of steps per unit path length; ``bound_path_length``
    is l^2/(2N) for the measured length, ``bound_fidelity`` the
    endpoint-fidelity bound that no path can beat.
    """

    kind: str
    n_steps: int
    total_entropy: float
    total_length: float
    step_lengths: np.ndarray
    step_yields: np.ndarray
    nu: float
    bound_path_length: float
    bound_fidelity: float
    endpoint_fidelity: float


def run_transport(schedule: TransportSchedule) -> TransportReport:
    """Sum per-step relative entropies along a schedule and attach bounds.

    Raises :class:`InfiniteYield` (with the step index) if any consecutive
    pair violates support.
    """
    yields = np.empty(schedule.n_steps)
    for i in range(schedule.n_steps):
        value = relative_entropy(schedule.states[i], schedule.states[i + 1])
        if math.isinf(value):
            raise InfiniteYield(f"support violation at step {i}", step=i)
        yields[i] = value
    total_length = float(schedule.step_lengths.sum())
    nu = math.inf if total_length == 0.0 else schedule.n_steps / total_length
    fid = state_fidelity(schedule.states[0], schedule.states[-1])
    return TransportReport(
        kind=schedule.kind,
        n_steps=schedule.n_steps,
        total_entropy=float(yields.sum()),
        total_length=total_length,
        step_lengths=schedule.step_lengths,
        step_yields=_freeze(yields),
        nu=nu,
        bound_path_length=min_entropy_production(total_length, schedule.n_steps),
        bound_fidelity=geodesic_bound(fid, schedule.n_steps, schedule.kind),
        endpoint_fidelity=fid,
    )


@dataclass(frozen=True, eq=False)
class ExpansionProbe:
    """Ratio table for the quadratic expansion of relative entropy.

    ``ratio_metric`` divides S(rho || rho + eps drho) by half the Fisher
    (classical) or Bures (quantum) element; ``ratio_kubo_mori`` divides by
    half the Kubo-Mori element, which is the exact second-order form.  The
    table asserts nothing; in particular the Bures column need not approach
    one for non-commuting steps.
    """

    eps: np.ndarray
    relative_entropies: np.ndarray
    metric_name: str
    ratio_metric: np.ndarray
    ratio_kubo_mori: np.ndarray


def expansion_probe(state, perturbation: TangentPerturbation, eps_list) -> ExpansionProbe:
    """Tabulate S(rho||rho + eps drho) / (dl^2/2) over a descending eps grid."""
    eps = np.asarray(eps_list, dtype=np.float64)
    if eps.ndim != 1 or eps.size == 0:
        raise ValueError("eps_list must be a nonempty vector")
    if np.any(eps <= 0.0) or (eps.size > 1 and np.any(np.diff(eps) >= 0.0)):
        raise ValueError("eps_list must be positive and strictly descending")
    entropies = np.empty(eps.size)
    ratio_metric = np.empty(eps.size)
    ratio_km = np.empty(eps.size)
    if isinstance(state, ProbabilityDistribution):
        if float(state.weights.min()) <= RANK_TOL:
            raise RankDeficient("expansion probe needs a full-support distribution")
        metric_name = "fisher"
        for k, e in enumerate(eps):
            perturbed = validate_distribution(state.weights + e * perturbation.delta)
            entropies[k] = relative_entropy(state, perturbed)
            element = fisher_element(state, perturbation, e)
            ratio_metric[k] = entropies[k] / (0.5 * element)
            # classical Kubo-Mori coincides with the Fisher element
            ratio_km[k] = ratio_metric[k]
    elif isinstance(state, DensityMatrix):
        if float(spectral(state).eigenvalues[-1]) <= RANK_TOL:
            raise RankDeficient("expansion probe needs a full-rank state")
        metric_name = "bures"
        for k, e in enumerate(eps):
            perturbed = validate_density(state.matrix + e * perturbation.delta)
            entropies[k] = relative_entropy(state, perturbed)
            ratio_metric[k] = entropies[k] / (0.5 * bures_element(state, perturbation, e))
            ratio_km[k] = entropies[k] / (0.5 * kubo_mori_element(state, perturbation, e))
    else:
        raise DimensionMismatch(f"cannot probe object of type {type(state).__name__}")
    return ExpansionProbe(
        _freeze(eps.copy()),
        _freeze(entropies),
        metric_name,
        _freeze(ratio_metric),
        _freeze(ratio_km),
    )
