"""Structured-text (JSON-compatible) and CSV serialization.

States travel as ``{"kind": "classical", "weights": [...]}`` or
``{"kind": "quantum", "matrix": [[[re, im], ...], ...]}``.  CSV output
uses '.' decimals, 12 significant digits, LF line endings, and carries
run metadata as leading ``# key=value`` comment lines.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .exceptions import ValidationError
from .geometry import PathLengthReport, TransportSchedule
from .pathopt import PathOptimizationResult
from .reservoir import ReservoirScanResult
from .states import (
    DensityMatrix,
    ProbabilityDistribution,
    validate_density,
    validate_distribution,
)
from .transport import ExpansionProbe, TransportReport


def format_float(value: float) -> str:
    """12-significant-digit text used in every CSV cell."""
    return format(float(value), ".12g")


def _json_float(value: float):
    # strict JSON has no Infinity literal
    return float(value) if math.isfinite(value) else "inf"


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_csv(path, columns, rows, metadata=None) -> None:
    """Write rows with optional ``# key=value`` metadata lines, LF-terminated."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key}={value}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


# ---------- states ----------

def state_to_jsonable(state) -> dict:
    """JSON-compatible form of a state, tagged by kind."""
    if isinstance(state, ProbabilityDistribution):
        return {"kind": "classical", "weights": [float(w) for w in state.weights]}
    if isinstance(state, DensityMatrix):
        matrix = [
            [[float(z.real), float(z.imag)] for z in row] for row in state.matrix
        ]
        return {"kind": "quantum", "matrix": matrix}
    raise ValidationError(f"cannot serialize object of type {type(state).__name__}")


def state_from_jsonable(obj):
    """Validated state from its JSON-compatible form; unknown keys rejected."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("state must be a mapping with a 'kind' field")
    kind = obj["kind"]
    if kind == "classical":
        extra = set(obj) - {"kind", "weights"}
        if extra:
            raise ValidationError(f"unknown state keys: {sorted(extra)}")
        return validate_distribution(obj["weights"])
    if kind == "quantum":
        extra = set(obj) - {"kind", "matrix"}
        if extra:
            raise ValidationError(f"unknown state keys: {sorted(extra)}")
        rows = obj["matrix"]
        try:
            mat = np.array(
                [[complex(re, im) for re, im in row] for row in rows],
                dtype=np.complex128,
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError("quantum state entries must be [re, im] pairs") from exc
        return validate_density(mat)
    raise ValidationError(f"unknown state kind {kind!r}")


def save_state(state, path) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(state_to_jsonable(state), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_state(path):
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_jsonable(json.load(fh))


# ---------- reports ----------

PATH_COLUMNS = ("i", "t_i", "delta_ell", "cumulative_ell")


def path_report_rows(report: PathLengthReport):
    """Rows (i, t_i, delta_ell, cumulative_ell) for a uniform-t length report."""
    cumulative = np.cumsum(report.step_lengths)
    return [
        (i, i / report.n_steps, float(report.step_lengths[i]), float(cumulative[i]))
        for i in range(report.n_steps)
    ]


def schedule_rows(schedule: TransportSchedule):
    """Rows (i, t_i, delta_ell, cumulative_ell) for a transport schedule."""
    cumulative = np.cumsum(schedule.step_lengths)
    return [
        (i, float(schedule.ts[i]), float(schedule.step_lengths[i]), float(cumulative[i]))
        for i in range(schedule.n_steps)
    ]


def path_report_to_jsonable(report: PathLengthReport) -> dict:
    return {
        "total_length": report.total_length,
        "n_steps": report.n_steps,
        "step_rule": report.step_rule,
        "step_lengths": [float(x) for x in report.step_lengths],
    }


def schedule_to_jsonable(schedule: TransportSchedule) -> dict:
    return {
        "kind": schedule.kind,
        "n_steps": schedule.n_steps,
        "step_rule": schedule.step_rule,
        "ts": [float(t) for t in schedule.ts],
        "step_lengths": [float(x) for x in schedule.step_lengths],
        "states": [state_to_jsonable(s) for s in schedule.states],
    }


TRANSPORT_COLUMNS = ("i", "delta_ell_i", "yield_i")


def transport_rows(report: TransportReport):
    return [
        (i, float(report.step_lengths[i]), float(report.step_yields[i]))
        for i in range(report.n_steps)
    ]


def transport_summary(report: TransportReport) -> dict:
    """Summary record attached to transport CSV output and JSON results."""
    return {
        "N": report.n_steps,
        "ell": report.total_length,
        "Delta_S": report.total_entropy,
        "bound_path_length": report.bound_path_length,
        "bound_fidelity": report.bound_fidelity,
        "nu": _json_float(report.nu),
    }


RESERVOIR_COLUMNS = ("n", "delta_S_n", "gap_n")


def reservoir_rows(result: ReservoirScanResult):
    return [
        (int(result.n_values[i]), float(result.delta_S[i]), float(result.gaps[i]))
        for i in range(result.n_values.size)
    ]


def reservoir_metadata(result: ReservoirScanResult) -> dict:
    reference = "inf" if math.isinf(result.reference) else format_float(result.reference)
    return {"reference": reference, "mode": result.mode}


HISTORY_COLUMNS = ("iter", "length", "energy", "step_cv")


def pathopt_history_rows(result: PathOptimizationResult):
    return [
        (i, float(result.lengths[i]), float(result.energies[i]), float(result.step_cvs[i]))
        for i in range(result.lengths.size)
    ]


PROBE_COLUMNS = ("eps", "ratio_metric", "ratio_kubo_mori")


def probe_rows(probe: ExpansionProbe):
    return [
        (float(probe.eps[i]), float(probe.ratio_metric[i]), float(probe.ratio_kubo_mori[i]))
        for i in range(probe.eps.size)
    ]


def transport_report_to_jsonable(report: TransportReport) -> dict:
    out = transport_summary(report)
    out.update(
        kind=report.kind,
        endpoint_fidelity=report.endpoint_fidelity,
        step_lengths=[float(x) for x in report.step_lengths],
        step_yields=[float(x) for x in report.step_yields],
    )
    return out


def reservoir_result_to_jsonable(result: ReservoirScanResult) -> dict:
    return {
        "mode": result.mode,
        "reference": _json_float(result.reference),
        "n": [int(n) for n in result.n_values],
        "delta_S": [float(x) for x in result.delta_S],
        "gap": [_json_float(x) for x in result.gaps],
    }


def pathopt_result_to_jsonable(result: PathOptimizationResult) -> dict:
    return {
        "kind": result.kind,
        "final_length": result.final_length,
        "final_energy": result.final_energy,
        "iterations": result.iterations,
        "converged": result.converged,
        "ridge": result.ridge,
        "states": [state_to_jsonable(s) for s in result.states],
    }
