"""Deterministic command-line experiment runner.

Each subcommand reads a JSON config, runs one experiment, and writes a
CSV or JSON record.  Every output embeds the tool version, a SHA-256
hash of the fully resolved config, and the seed, and contains no
timestamps, so a repeated run produces byte-identical files.

Exit status: 0 success, 2 invalid input, 3 resource cap exceeded,
4 optimizer did not converge.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__
from . import serialize
from .exceptions import DimensionCapExceeded, StatlenError
from .geometry import (
    classical_geodesic_path,
    commuting_quantum_geodesic,
    even_schedule,
    geodesic_length_bures,
    geodesic_length_fisher,
    linear_mixture_path,
    state_fidelity,
)
from .pathopt import minimize_path
from .reservoir import convergence_scan
from .states import (
    ProbabilityDistribution,
    random_distribution,
    random_state,
    tangent_classical,
    tangent_quantum,
)
from .transport import expansion_probe, run_transport

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_NOT_CONVERGED = 4


class ConfigError(ValueError):
    """Malformed or incomplete experiment configuration."""


def _check_keys(obj: dict, required: set, optional: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a mapping")
    keys = set(obj)
    missing = required - keys
    if missing:
        raise ConfigError(f"{where} is missing keys: {sorted(missing)}")
    unknown = keys - required - optional
    if unknown:
        raise ConfigError(f"{where} has unknown keys: {sorted(unknown)}")


_COMMON_OPTIONAL = {"seed", "out", "format"}


def _resolve_state(spec, seed_pool, where: str):
    """Resolve a state spec: inline arrays, a file reference, or a random draw."""
    if not isinstance(spec, dict):
        raise ConfigError(f"{where} must be a mapping")
    if "file" in spec:
        _check_keys(spec, {"file"}, set(), where)
        return serialize.load_state(spec["file"])
    kind = spec.get("kind")
    if kind == "random-quantum":
        _check_keys(spec, {"kind", "dim", "rank"}, set(), where)
        return random_state(int(spec["dim"]), int(spec["rank"]), seed_pool())
    if kind == "random-classical":
        _check_keys(spec, {"kind", "dim"}, set(), where)
        return random_distribution(int(spec["dim"]), seed_pool())
    return serialize.state_from_jsonable(spec)


def _seed_pool(seed: int):
    seeds = iter(np.random.SeedSequence(seed).generate_state(64))

    def next_seed() -> int:
        return int(next(seeds))

    return next_seed


def _config_hash(resolved: dict) -> str:
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _write_record(resolved: dict, columns, rows, metadata: dict, results: dict) -> None:
    base_meta = {
        "tool": "statlen",
        "version": __version__,
        "config_hash": _config_hash(resolved),
        "seed": resolved["seed"],
    }
    if resolved["format"] == "csv":
        meta = dict(base_meta)
        meta["config"] = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
        meta.update(metadata)
        serialize.write_csv(resolved["out"], columns, rows, meta)
    else:
        record = dict(base_meta)
        record["config"] = resolved
        record["results"] = results
        with open(resolved["out"], "w", newline="\n", encoding="utf-8") as fh:
            json.dump(record, fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------- experiments ----------

def _path_from_config(spec: dict, seed_pool) -> tuple:
    _check_keys(spec, {"type", "state_a", "state_b"}, set(), "path")
    a = _resolve_state(spec["state_a"], seed_pool, "path.state_a")
    b = _resolve_state(spec["state_b"], seed_pool, "path.state_b")
    if type(a) is not type(b):
        raise ConfigError("path endpoints must be states of the same kind")
    ptype = spec["type"]
    if ptype == "mixture":
        path = linear_mixture_path(a, b)
    elif ptype == "geodesic":
        if isinstance(a, ProbabilityDistribution):
            path = classical_geodesic_path(a, b)
        else:
            path = commuting_quantum_geodesic(a, b)
    else:
        raise ConfigError(f"unknown path type {ptype!r}; choose 'geodesic' or 'mixture'")
    resolved_spec = {
        "type": ptype,
        "state_a": serialize.state_to_jsonable(a),
        "state_b": serialize.state_to_jsonable(b),
    }
    return path, resolved_spec


def cmd_fidelity(config: dict, resolved: dict, seed_pool) -> int:
    _check_keys(config, {"state_a", "state_b"}, _COMMON_OPTIONAL, "config")
    a = _resolve_state(config["state_a"], seed_pool, "state_a")
    b = _resolve_state(config["state_b"], seed_pool, "state_b")
    resolved["state_a"] = serialize.state_to_jsonable(a)
    resolved["state_b"] = serialize.state_to_jsonable(b)
    fid = state_fidelity(a, b)
    results = {
        "fidelity": fid,
        "length_fisher": geodesic_length_fisher(fid),
        "length_bures": geodesic_length_bures(fid),
    }
    columns = ("fidelity", "length_fisher", "length_bures")
    rows = [(results["fidelity"], results["length_fisher"], results["length_bures"])]
    _write_record(resolved, columns, rows, {}, results)
    return EXIT_OK


def cmd_transport(config: dict, resolved: dict, seed_pool) -> int:
    _check_keys(
        config, {"path"}, _COMMON_OPTIONAL | {"N", "N_grid", "step_rule"}, "config"
    )
    if ("N" in config) == ("N_grid" in config):
        raise ConfigError("config needs exactly one of 'N' or 'N_grid'")
    grid = [int(config["N"])] if "N" in config else [int(n) for n in config["N_grid"]]
    path, resolved_spec = _path_from_config(config["path"], seed_pool)
    resolved["path"] = resolved_spec
    rule = config.get("step_rule")
    columns = (
        "N",
        "Delta_S",
        "N_Delta_S",
        "half_ell_sq",
        "bound_fidelity",
        "nu",
        "rate_ratio",
    )
    rows = []
    results = []
    for n in sorted(grid):
        report = run_transport(even_schedule(path, n, step_rule=rule))
        ds = report.total_entropy
        ell = report.total_length
        rate_ratio = ds * 2.0 * report.nu / ell if ell > 0.0 else 0.0
        rows.append(
            (
                n,
                ds,
                n * ds,
                0.5 * ell * ell,
                report.bound_fidelity,
                report.nu,
                rate_ratio,
            )
        )
        summary = serialize.transport_summary(report)
        summary["rate_ratio"] = rate_ratio
        results.append(summary)
    _write_record(resolved, columns, rows, {}, {"grid": results})
    return EXIT_OK


def cmd_reservoir(config: dict, resolved: dict, seed_pool) -> int:
    _check_keys(config, {"state_a", "state_b", "n_max"}, _COMMON_OPTIONAL, "config")
    a = _resolve_state(config["state_a"], seed_pool, "state_a")
    b = _resolve_state(config["state_b"], seed_pool, "state_b")
    resolved["state_a"] = serialize.state_to_jsonable(a)
    resolved["state_b"] = serialize.state_to_jsonable(b)
    scan = convergence_scan(a, b, int(config["n_max"]))
    _write_record(
        resolved,
        serialize.RESERVOIR_COLUMNS,
        serialize.reservoir_rows(scan),
        serialize.reservoir_metadata(scan),
        serialize.reservoir_result_to_jsonable(scan),
    )
    return EXIT_OK


def cmd_geodesic(config: dict, resolved: dict, seed_pool) -> int:
    optional = _COMMON_OPTIONAL | {"seed_path", "ridge", "max_iter", "history_out"}
    _check_keys(config, {"state_a", "state_b", "N"}, optional, "config")
    a = _resolve_state(config["state_a"], seed_pool, "state_a")
    b = _resolve_state(config["state_b"], seed_pool, "state_b")
    resolved["state_a"] = serialize.state_to_jsonable(a)
    resolved["state_b"] = serialize.state_to_jsonable(b)
    seed_kind = config.get("seed_path", "mixture")
    if seed_kind == "mixture":
        seed_path = None
    elif seed_kind == "geodesic":
        seed_path = (
            classical_geodesic_path(a, b)
            if isinstance(a, ProbabilityDistribution)
            else commuting_quantum_geodesic(a, b)
        )
    else:
        raise ConfigError(f"unknown seed_path {seed_kind!r}")
    result = minimize_path(
        a,
        b,
        int(config["N"]),
        seed_path,
        max_iter=int(config.get("max_iter", 5000)),
        ridge=config.get("ridge"),
    )
    fid = state_fidelity(a, b)
    results = serialize.pathopt_result_to_jsonable(result)
    results["candidate_arc"] = geodesic_length_fisher(fid)
    results["candidate_chordal"] = geodesic_length_bures(fid)
    del results["states"]
    columns = (
        "final_length",
        "candidate_arc",
        "candidate_chordal",
        "final_energy",
        "iterations",
        "converged",
    )
    rows = [
        (
            result.final_length,
            results["candidate_arc"],
            results["candidate_chordal"],
            result.final_energy,
            result.iterations,
            result.converged,
        )
    ]
    history_out = config.get("history_out", str(resolved["out"]) + ".history.csv")
    resolved["history_out"] = history_out
    serialize.write_csv(
        history_out,
        serialize.HISTORY_COLUMNS,
        serialize.pathopt_history_rows(result),
        {
            "tool": "statlen",
            "version": __version__,
            "config_hash": _config_hash(resolved),
            "seed": resolved["seed"],
        },
    )
    _write_record(resolved, columns, rows, {"history": history_out}, results)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_probe(config: dict, resolved: dict, seed_pool) -> int:
    _check_keys(config, {"state", "perturbation", "eps_grid"}, _COMMON_OPTIONAL, "config")
    state = _resolve_state(config["state"], seed_pool, "state")
    resolved["state"] = serialize.state_to_jsonable(state)
    if isinstance(state, ProbabilityDistribution):
        tangent = tangent_classical(config["perturbation"])
    else:
        rows = config["perturbation"]
        mat = np.array(
            [[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128
        )
        tangent = tangent_quantum(mat)
    probe = expansion_probe(state, tangent, [float(e) for e in config["eps_grid"]])
    results = {
        "metric": probe.metric_name,
        "eps": [float(e) for e in probe.eps],
        "ratio_metric": [float(r) for r in probe.ratio_metric],
        "ratio_kubo_mori": [float(r) for r in probe.ratio_kubo_mori],
    }
    _write_record(
        resolved,
        serialize.PROBE_COLUMNS,
        serialize.probe_rows(probe),
        {"metric": probe.metric_name},
        results,
    )
    return EXIT_OK


_HANDLERS = {
    "fidelity": cmd_fidelity,
    "transport": cmd_transport,
    "reservoir": cmd_reservoir,
    "geodesic": cmd_geodesic,
    "probe": cmd_probe,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statlen",
        description="Run fidelity, transport, reservoir, geodesic, and probe experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("fidelity", "fidelity and geodesic lengths of a state pair"),
        ("transport", "even-schedule transport entropy over an N grid"),
        ("reservoir", "finite-reservoir entropy production scan"),
        ("geodesic", "numerical geodesic search between two states"),
        ("probe", "quadratic expansion probe of relative entropy"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="seed (default 0)")
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"statlen: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if not isinstance(config, dict):
        print("statlen: config must be a JSON object", file=sys.stderr)
        return EXIT_INVALID

    seed = args.seed if args.seed is not None else int(config.get("seed", 0))
    out = args.out if args.out is not None else config.get("out")
    fmt = args.format if args.format is not None else config.get("format", "csv")
    if out is None:
        print("statlen: no output path (--out or config 'out')", file=sys.stderr)
        return EXIT_INVALID
    if fmt not in ("csv", "json"):
        print(f"statlen: unknown format {fmt!r}", file=sys.stderr)
        return EXIT_INVALID

    resolved = dict(config)
    resolved["seed"] = seed
    resolved["out"] = str(out)
    resolved["format"] = fmt
    resolved["experiment"] = args.command

    try:
        return _HANDLERS[args.command](config, resolved, _seed_pool(seed))
    except DimensionCapExceeded as exc:
        print(f"statlen: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConfigError, StatlenError, ValueError, OSError, KeyError, TypeError) as exc:
        print(f"statlen: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
