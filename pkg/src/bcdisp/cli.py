"""Command-line front end: ``bcdisp region|simulate|rcu|fading --config <path>``.

Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 size guard.
"""

from __future__ import annotations

import argparse
import copy
import datetime as _dt
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from . import analysis, fading, montecarlo
from .model import ChannelConfig, ConfigError, FadingSpec, NoiseSpec, config_problems

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_SIZE = 4

_FIELD_POINTERS = {
    "total_power": "/channel/total_power",
    "alpha": "/channel/alpha",
    "beta": "/channel/beta",
    "noise1": "/channel/noise1",
    "noise2": "/channel/noise2",
}


def load_schema() -> dict:
    return json.loads(resources.files("bcdisp").joinpath("config_schema.json").read_text())


@dataclass
class ExperimentConfig:
    channel: ChannelConfig
    raw: dict
    fading: tuple[FadingSpec, FadingSpec] | None = None
    dispersion_gain: str = "cross"
    seed: int | None = None
    output_dir: str | None = None
    sections: dict = field(default_factory=dict)

    def fingerprint(self) -> str:
        doc = copy.deepcopy(self.raw)
        doc.pop("output_dir", None)
        doc["seed"] = self.seed
        return montecarlo.fingerprint(doc)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def _schema_problems(doc) -> list[str]:
    validator = jsonschema.Draft202012Validator(load_schema())
    out = []
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path))):
        path = list(err.absolute_path)
        if err.validator == "additionalProperties" and isinstance(err.instance, dict):
            allowed = set(err.schema.get("properties", {}))
            for key in sorted(set(err.instance) - allowed):
                out.append(f"{_pointer(path + [key])}: unknown field {key!r}")
            continue
        out.append(f"{_pointer(path)}: {err.message}")
    return out


def _noise(doc: dict | None, pointer: str, problems: list) -> NoiseSpec | None:
    if doc is None:
        return None
    try:
        return NoiseSpec.make(doc["family"], doc["variance"], doc.get("moment4"))
    except ConfigError as exc:
        problems.extend(f"{pointer}: {p}" for p in exc.problems)
        return None


def parse_document(doc) -> ExperimentConfig:
    problems = _schema_problems(doc)
    if problems:
        raise ConfigError(problems)
    ch = doc["channel"]
    noise1 = _noise(ch.get("noise1"), "/channel/noise1", problems)
    noise2 = _noise(ch.get("noise2"), "/channel/noise2", problems)
    if problems:
        raise ConfigError(problems)
    cfg = ChannelConfig(float(ch["total_power"]), float(ch["alpha"]), float(ch["beta"]), noise1, noise2)
    for p in config_problems(cfg):
        key = p.split(" ")[0].rstrip(":")
        problems.append(f"{_FIELD_POINTERS.get(key, '/channel')}: {p}")
    fad = None
    gain_choice = "cross"
    if "fading" in doc:
        specs = []
        for user in ("user1", "user2"):
            d = doc["fading"][user]
            spec = FadingSpec(d["family"], float(d.get("scale", 1.0)), float(d.get("k_factor", 0.0)),
                              float(d.get("gain", 1.0)))
            problems.extend(f"/fading/{user}: {p}" for p in spec.problems())
            specs.append(spec)
        fad = (specs[0], specs[1])
        gain_choice = doc["fading"].get("dispersion_gain", "cross")
    if problems:
        raise ConfigError(problems)
    sections = {k: doc[k] for k in ("region", "simulate", "rcu", "outage") if k in doc}
    return ExperimentConfig(cfg, doc, fad, gain_choice, doc.get("seed"), doc.get("output_dir"), sections)


def parse_config(path) -> ExperimentConfig:
    """Read and fully validate a JSON experiment config; ConfigError lists every problem."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {p}: {exc}") from exc
    return parse_document(doc)


# ---------------------------------------------------------------- output

def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_doc(kind: str, fp: str, payload: dict) -> str:
    doc = {"schema": 1, "kind": kind, "config_fingerprint": fp,
           "created_at": _dt.datetime.now(_dt.timezone.utc).isoformat(), **payload}
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _csv_comment(fp: str) -> str:
    return f"bcdisp schema=1 fingerprint={fp}"


def _section(exp: ExperimentConfig, name: str) -> dict:
    if name not in exp.sections:
        raise ConfigError(f"/{name}: section required for this command")
    return exp.sections[name]


def _require_seed(exp: ExperimentConfig) -> int:
    if exp.seed is None:
        raise ConfigError("/seed: an explicit seed is required (config 'seed' or --seed)")
    return exp.seed


def _sizes(exp: ExperimentConfig, section: str, n: int) -> tuple[float, float]:
    s = _section(exp, section)["sizes"]
    forms = [("m1" in s or "m2" in s), ("log_m1" in s or "log_m2" in s), ("target" in s)]
    ptr = f"/{section}/sizes"
    if sum(forms) != 1:
        raise ConfigError(f"{ptr}: give exactly one of m1/m2, log_m1/log_m2 or target")
    if forms[0]:
        if not ("m1" in s and "m2" in s):
            raise ConfigError(f"{ptr}: both m1 and m2 are required")
        return math.log(s["m1"]), math.log(s["m2"])
    if forms[1]:
        if not ("log_m1" in s and "log_m2" in s):
            raise ConfigError(f"{ptr}: both log_m1 and log_m2 are required")
        return float(s["log_m1"]), float(s["log_m2"])
    t = s["target"]
    try:
        return analysis.normal_approx_log_m(exp.channel, n, t["eps1"], t["eps2"], t.get("criterion", "sep"))
    except ValueError as exc:
        raise ConfigError(f"{ptr}/target: {exc}") from exc


# ---------------------------------------------------------------- commands

def cmd_region(exp: ExperimentConfig, out_dir: Path) -> int:
    sec = _section(exp, "region")
    crit = sec["criterion"]
    cfg = exp.channel
    fp = exp.fingerprint()
    points = sec.get("points", analysis.DEFAULT_GRID_POINTS)
    if crit == "first":
        bounds = [analysis.first_order_region(cfg, analysis.default_alpha_grid(points))]
        b = bounds[0]
        summary = f"first-order frontier: {len(b.points)} points from {tuple(b.points[0])} to {tuple(b.points[-1])}"
    elif crit == "sep":
        if "eps1" not in sec or "eps2" not in sec:
            raise ConfigError("/region: criterion 'sep' requires eps1 and eps2")
        corner = analysis.sep_second_order_point(cfg, sec["eps1"], sec["eps2"])
        v1, v2 = analysis.dispersions(cfg)
        bounds = [analysis.RegionBoundary("sep", [corner], {"eps1": sec["eps1"], "eps2": sec["eps2"],
                                                            "V1": v1, "V2": v2})]
        summary = f"sep corner: L1={corner.l1:.10g} L2={corner.l2:.10g}"
    elif crit == "jep":
        if "eps" not in sec:
            raise ConfigError("/region: criterion 'jep' requires eps")
        eps = sec["eps"]
        jep = analysis.jep_second_order_boundary(cfg, eps, analysis.default_jep_l1_grid(cfg, eps, points))
        sep = analysis.sep_tradeoff_boundary(cfg, eps, points)
        bounds = [jep, sep]
        summary = (f"jep asymptotes: L1={jep.metadata['asymptote_l1']:.10g} "
                   f"L2={jep.metadata['asymptote_l2']:.10g}")
    else:
        if exp.fading is None:
            raise ConfigError("/fading: criterion 'outage' requires a fading block")
        if "eps1" not in sec or "eps2" not in sec:
            raise ConfigError("/region: criterion 'outage' requires eps1 and eps2")
        b = fading.outage_region(cfg, exp.fading[0], exp.fading[1], sec["eps1"], sec["eps2"])
        bounds = [b]
        summary = f"outage corner: R1={b.metadata['corner'][0]:.10g} R2={b.metadata['corner'][1]:.10g}"
    path = out_dir / f"region_{crit}.csv"
    atomic_write(path, analysis.boundaries_to_csv(bounds, _csv_comment(fp)))
    print(f"{summary} -> {path}")
    return EXIT_OK


def cmd_simulate(exp: ExperimentConfig, out_dir: Path, workers: int = 1) -> int:
    sec = _section(exp, "simulate")
    seed = _require_seed(exp)
    n = sec["n"]
    lm1, lm2 = _sizes(exp, "simulate", n)
    fad = None
    if sec.get("use_fading", False):
        if exp.fading is None:
            raise ConfigError("/simulate/use_fading: requires a fading block")
        fad = exp.fading
    rep = montecarlo.run_simulation(exp.channel, n, lm1, lm2, sec["decoder"], sec["trials"], seed,
                                    batch=sec.get("batch", 100), workers=workers,
                                    method=sec.get("method", "direct"), fading=fad)
    path = out_dir / "simulate.json"
    atomic_write(path, _json_doc("simulation", exp.fingerprint(), {"report": rep.to_json()}))
    for name, est, ci in (("Pe1", rep.est1, rep.ci1), ("Pe2", rep.est2, rep.ci2), ("PeJ", rep.estJ, rep.ciJ)):
        print(f"{name} = {est:.6g}  95% CI [{ci[0]:.6g}, {ci[1]:.6g}]")
    print(f"-> {path}")
    return EXIT_OK


def cmd_rcu(exp: ExperimentConfig, out_dir: Path) -> int:
    sec = _section(exp, "rcu")
    seed = _require_seed(exp)
    n = sec["n"]
    lm1, lm2 = _sizes(exp, "rcu", n)
    est = montecarlo.rcu_bound(exp.channel, n, lm1, lm2, sec["bound_kind"], sec["samples"], seed,
                               quad_nodes=sec.get("quad_nodes", 200))
    path = out_dir / "rcu.json"
    atomic_write(path, _json_doc("rcu", exp.fingerprint(), {"estimate": est.to_json()}))
    print(f"{est.bound_kind} <= {est.value:.6g} (std error {est.std_error:.3g}) -> {path}")
    return EXIT_OK


def cmd_fading(exp: ExperimentConfig, out_dir: Path) -> int:
    if exp.fading is None:
        raise ConfigError("/fading: fading block required for this command")
    sec = _section(exp, "outage")
    cfg = exp.channel
    fp = exp.fingerprint()
    region = fading.outage_region(cfg, exp.fading[0], exp.fading[1], sec["eps1"], sec["eps2"])
    r1, r2 = region.metadata["corner"]
    rates = (sec.get("rate1", r1), sec.get("rate2", r2))
    method = sec.get("method", "quadrature")
    seed = _require_seed(exp) if method == "monte_carlo" else (exp.seed or 0)
    n_values = sec.get("n_values", [100, 400, 1600])
    users = []
    for user, spec, other, rate in ((1, exp.fading[0], exp.fading[1], rates[0]),
                                    (2, exp.fading[1], exp.fading[0], rates[1])):
        outage = fading.outage_prob(cfg, spec, user, rate)
        rows = []
        for n in n_values:
            val, se = fading.theorem3_bound(cfg, spec, user, n, n * rate, samples=sec.get("samples", 200_000),
                                            seed=seed, method=method, spec_other=other,
                                            dispersion_gain=exp.dispersion_gain)
            rows.append({"n": n, "log_m": n * rate, "value": val, "std_error": se})
        users.append({"user": user, "rate": rate, "outage": outage.to_json(), "bound": rows})
    csv_path = out_dir / "outage_region.csv"
    json_path = out_dir / "fading_bound.json"
    atomic_write(csv_path, analysis.boundaries_to_csv([region], _csv_comment(fp)))
    atomic_write(json_path, _json_doc("fading_bound", fp, {
        "dispersion_gain": exp.dispersion_gain, "method": method, "users": users,
        "region": region.to_json()}))
    print(f"outage corner: R1={r1:.10g} R2={r2:.10g} -> {csv_path}, {json_path}")
    return EXIT_OK


COMMANDS = {"region": cmd_region, "simulate": cmd_simulate, "rcu": cmd_rcu, "fading": cmd_fading}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bcdisp", description="Dispersion and simulation tools for the two-user broadcast channel.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="JSON experiment config")
    ap.add_argument("--out", help="output directory (default: config output_dir or current directory)")
    ap.add_argument("--workers", type=int, default=1, help="worker processes for simulate")
    ap.add_argument("--seed", type=int, help="override the config seed")
    return ap


def _err(msg: str) -> None:
    print(f"bcdisp: {msg}", file=sys.stderr)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed must be >= 0")
        exp = parse_config(args.config)
        if args.seed is not None:
            exp.seed = args.seed
        out_dir = Path(args.out or exp.output_dir or ".")
        if args.command == "simulate":
            return cmd_simulate(exp, out_dir, args.workers)
        return COMMANDS[args.command](exp, out_dir)
    except montecarlo.SizeLimitError as exc:
        _err(f"size limit: {exc}. The rcu command has no codebook-size limit.")
        return EXIT_SIZE
    except ConfigError as exc:
        for p in exc.problems:
            _err(f"config error: {p}")
        return EXIT_CONFIG
    except (ArithmeticError, FloatingPointError) as exc:
        _err(f"numeric failure: {exc}")
        return EXIT_NUMERIC
    except ValueError as exc:
        _err(f"invalid input: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
