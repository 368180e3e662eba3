"""Batch experiment runner: constants, verify, probe.

Exit codes: 0 success (verify: all assertions pass), 1 assertion
failures, 2 config parse/validation error, 3 certification violation
under --strict.  Reports are pure functions of (config bytes, seed):
no timestamps, sorted keys, ordered merges.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import math
import sys
from importlib import metadata, resources
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig, build_weight, parse_config, render_config
from .constants import (
    CertificationError,
    a_sparse_constant,
    a_strong_constant,
    convexity_constants,
    fujii_wilson_constant,
    g_constant,
    muckenhoupt_space_constant,
    muckenhoupt_weight_constant,
    op_norm,
)
from .mesh import GridFunction
from .operators import DyadicMaximal
from .spaces import Certification
from .suites import SUITES, SuiteConfigError

EXIT_OK = 0
EXIT_ASSERTIONS = 1
EXIT_CONFIG = 2
EXIT_CERTIFICATION = 3


def _version() -> str:
    try:
        return metadata.version("dyadlab")
    except metadata.PackageNotFoundError:
        return "unknown"


def _load_config(path: str | None) -> tuple[ExperimentConfig, bytes]:
    if path is None:
        raw = (
            resources.files("dyadlab").joinpath("data/default_config.json").read_bytes()
        )
    else:
        raw = Path(path).read_bytes()
    return parse_config(raw.decode()), raw


def _write(out_dir: Path, name: str, text: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text)


def _manifest(out_dir: Path, cfg: ExperimentConfig, raw: bytes, args) -> None:
    lines = [
        f"dyadlab {_version()}",
        f"config sha256 {hashlib.sha256(raw).hexdigest()}",
        f"seed {cfg.seed}",
        f"mesh d={cfg.d} L={cfg.L}",
        f"strict {cfg.strict}",
        f"jobs {args.jobs}",
    ]
    _write(out_dir, "MANIFEST", "\n".join(lines) + "\n")


def _run_constant(cfg: ExperimentConfig, req: dict, strict: bool):
    mesh = cfg.mesh()
    name = req["name"]
    seed = int(req.get("seed", cfg.seed))
    budget = int(req.get("budget", 200))
    if name == "muckenhoupt_p":
        w = GridFunction(mesh, build_weight(mesh, req["weight"]))
        p = math.inf if req.get("p", 2.0) == "inf" else float(req.get("p", 2.0))
        return muckenhoupt_weight_constant(w, p)
    if name == "fujii_wilson":
        w = GridFunction(mesh, build_weight(mesh, req["weight"]))
        return fujii_wilson_constant(w)
    X = cfg.build_space(req["space"])
    if name == "A":
        return muckenhoupt_space_constant(X, strict=strict, seed=seed, budget=budget)
    if name == "A_strong":
        return a_strong_constant(X, mode=req.get("mode", "auto"), budget=budget, seed=seed)
    if name == "A_sparse":
        return a_sparse_constant(
            X,
            eta=float(req.get("eta", 0.5)),
            mode=req.get("mode", "auto"),
            budget=budget,
            seed=seed,
        )
    if name == "G":
        return g_constant(X, mode=req.get("mode", "auto"), budget=budget, seed=seed)
    if name in ("op_norm", "weak_op_norm"):
        target = "strong" if name == "op_norm" else "weak"
        return op_norm(DyadicMaximal(), X, target=target, budget=budget, seed=seed)
    if name in ("convexity", "concavity"):
        conv, conc = convexity_constants(
            X, float(req.get("r", 1.0)), float(req.get("s", math.inf)), budget=budget, seed=seed
        )
        return conv if name == "convexity" else conc
    raise ConfigError(f"unknown constant {name!r}")


def cmd_constants(args) -> int:
    try:
        cfg, raw = _load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    strict = cfg.strict or args.strict
    if args.seed is not None:
        cfg.seed = args.seed
    out_dir = Path(args.out)
    reports = []
    try:
        for req in cfg.constants:
            rep = _run_constant(cfg, req, strict)
            if strict and rep.certification != Certification.EXACT:
                raise CertificationError(
                    f"constant {req['name']} is {rep.certification.value} under --strict"
                )
            reports.append((req, rep))
    except CertificationError as exc:
        print(f"certification violation: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    doc = [
        {"request": req, "report": json.loads(rep.to_json())} for req, rep in reports
    ]
    _write(out_dir, "constants.json", json.dumps(doc, sort_keys=True, indent=2) + "\n")
    rows = ["index,name,value,certification"]
    rows += [f"{i},{rep.name},{rep.value!r},{rep.certification.value}" for i, (_, rep) in enumerate(reports)]
    _write(out_dir, "constants.csv", "\n".join(rows) + "\n")
    _manifest(out_dir, cfg, raw, args)
    for i, (_, rep) in enumerate(reports):
        print(f"[{i}] {rep.name} = {rep.value:.12g} ({rep.certification.value})")
    return EXIT_OK


def _suite_task(item: tuple[int, str, dict, int, bool]):
    idx, sid, kwargs, seed, strict = item
    fn = SUITES[sid]
    rep = fn(seed=seed, strict=strict, **kwargs)
    return idx, rep.to_dict()


def _suite_kwargs(cfg: ExperimentConfig, sdoc: dict) -> dict:
    kwargs = {k: v for k, v in sdoc.items() if k not in ("id", "seed")}
    kwargs.setdefault("d", cfg.d)
    if sdoc["id"] in ("theorem_chain", "duality", "theorem_c", "conjecture_probe", "appendix"):
        kwargs.setdefault("depth", cfg.L)
    for key in ("depths", "weak_depths", "fs_depths"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    return kwargs


def _run_suites(cfg: ExperimentConfig, args, only: str | None):
    tasks = []
    for i, sdoc in enumerate(cfg.suites):
        if only is not None and sdoc["id"] != only:
            continue
        seed = int(sdoc.get("seed", cfg.seed))
        strict = cfg.strict or args.strict
        tasks.append((i, sdoc["id"], _suite_kwargs(cfg, sdoc), seed, strict))
    results: list[tuple[int, dict]] = []
    if args.jobs > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_suite_task, tasks))
    else:
        results = [_suite_task(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    return results


def _csv_rows(results) -> list[str]:
    rows = ["suite,instance,quantity,value,certification"]
    for idx, rep in results:
        name = rep["suite"]
        for j, record in enumerate(rep["records"]):
            inst = record.get("instance", j)
            for key, value in sorted(record.items()):
                if isinstance(value, (int, float)) and key != "instance":
                    rows.append(f"{name},{inst},{key},{value!r},")
                elif isinstance(value, list) and all(
                    isinstance(v, (int, float)) for v in value
                ):
                    for k, v in enumerate(value):
                        rows.append(f"{name},{inst},{key}[{k}],{v!r},")
        for a in rep["assertions"]:
            rows.append(f"{name},{a['id']},lhs,{a['lhs']!r},{a['lhs_cert']}")
            rows.append(f"{name},{a['id']},rhs,{a['rhs']!r},{a['rhs_cert']}")
    return rows


def cmd_verify(args) -> int:
    try:
        cfg, raw = _load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg.seed = args.seed
    out_dir = Path(args.out)
    try:
        results = _run_suites(cfg, args, args.suite)
    except SuiteConfigError as exc:
        print(f"certification violation: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    failing: list[str] = []
    for idx, rep in results:
        _write(
            out_dir,
            f"suite_{idx:02d}_{rep['suite']}.json",
            json.dumps(rep, sort_keys=True, indent=2) + "\n",
        )
        for a in rep["assertions"]:
            if not a["passed"]:
                failing.append(f"{rep['suite']}:{a['id']}")
        status = "pass" if rep["passed"] else "FAIL"
        print(f"suite {rep['suite']}: {status} ({len(rep['assertions'])} assertions)")
    _write(out_dir, "summary.csv", "\n".join(_csv_rows(results)) + "\n")
    _manifest(out_dir, cfg, raw, args)
    if failing:
        print("failing assertions:", file=sys.stderr)
        for fid in failing:
            print(f"  {fid}", file=sys.stderr)
        return EXIT_ASSERTIONS
    return EXIT_OK


def cmd_probe(args) -> int:
    from .suites import suite_conjecture_probe

    try:
        cfg, raw = _load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg.seed = args.seed
    out_dir = Path(args.out)
    spaces = [cfg.build_space(i) for i in range(len(cfg.spaces))]
    rep = suite_conjecture_probe(seed=cfg.seed, depth=cfg.L, d=cfg.d, spaces=spaces)
    results = [(0, rep.to_dict())]
    _write(out_dir, "probe_00.json", json.dumps(results[0][1], sort_keys=True, indent=2) + "\n")
    _write(out_dir, "probe.csv", "\n".join(_csv_rows(results)) + "\n")
    _manifest(out_dir, cfg, raw, args)
    print(f"probe complete: {len(rep.records)} records")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="dyadlab",
        description="dyadic-mesh laboratory for function-space constants",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("constants", cmd_constants),
        ("verify", cmd_verify),
        ("probe", cmd_probe),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="config JSON (default: bundled)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--out", default="reports", help="output directory")
        p.add_argument("--strict", action="store_true", help="refuse uncertified assertions")
        p.add_argument("--jobs", type=int, default=1, help="parallel suite workers")
        p.add_argument("--suite", default=None, help="run only this suite id")
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
