"""Command-line entry point.

Subcommands::

    nhls run <scenario> [--set key=value ...] [--out DIR]
    nhls suite [--filter a,b,...] [--workers N] [--out DIR]
    nhls dispersion --params J=1,delta=0.5,gamma=0.5 [--band +1] [...] --out FILE
    nhls overlap    --params J=1,delta=0.5,gamma=0.5 [...] --out FILE
    nhls spec validate <file.json>
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .analytic import dispersion, band_overlap, write_curve_csv
from .experiments import (
    ConfigError,
    ScenarioConfig,
    run_scenario,
    run_suite,
    scenario_ids,
)
from .lattice import LatticeError, from_json_document
from .params import ModelParams


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if "," in text:
            return [_parse_value(v) for v in text.split(",")]
        return text


def _parse_sets(pairs: list[str]) -> dict:
    overrides = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, _, raw = pair.partition("=")
        overrides[key.strip()] = _parse_value(raw.strip())
    return overrides


def _parse_params(text: str) -> ModelParams:
    fields = {"J": 1.0, "delta": 0.5, "gamma": 0.5}
    for pair in text.split(","):
        key, _, raw = pair.partition("=")
        key = key.strip()
        if key not in fields:
            raise ConfigError(f"unknown model parameter {key!r} (J, delta, gamma)")
        fields[key] = float(raw)
    return ModelParams(**fields)


def _print_result(result) -> None:
    print(f"scenario {result.scenario_id}: {'PASS' if result.passed else 'FAIL'}")
    for metric, value, thr, ok in result.summary:
        print(f"  [{'ok' if ok else 'FAIL':>4}] {metric} = {value:.6g}  (want {thr})")
    informational = set(result.metrics) - {m for m, *_ in result.summary}
    for metric in sorted(informational):
        print(f"  [info] {metric} = {result.metrics[metric]:.6g}")
    if result.artifacts:
        print("  artifacts: " + ", ".join(sorted(result.artifacts.values())))


def _cmd_run(args) -> int:
    cfg = ScenarioConfig(args.scenario, _parse_sets(args.set), args.out)
    result = run_scenario(cfg)
    _print_result(result)
    return 0 if result.passed else 1


def _cmd_suite(args) -> int:
    ids = args.filter.split(",") if args.filter else None
    suite = run_suite(ids, workers=args.workers, output_dir=args.out)
    for sid, result in suite.results.items():
        _print_result(result)
    for name, ok, detail in suite.extra_checks:
        print(f"cross-check {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    n_pass = sum(r.passed for r in suite.results.values())
    print(f"suite: {n_pass}/{len(suite.results)} scenarios pass"
          f"{'' if suite.passed else ' (failures above)'}")
    return 0 if suite.passed else 1


def _curve_grid(args) -> np.ndarray:
    return np.linspace(args.kmin, args.kmax, args.samples)


def _cmd_dispersion(args) -> int:
    params = _parse_params(args.params)
    k = _curve_grid(args)
    values = dispersion(k, params, band=args.band)
    write_curve_csv(args.out, k, values)
    print(f"wrote {args.samples} dispersion samples to {args.out}")
    return 0


def _cmd_overlap(args) -> int:
    params = _parse_params(args.params)
    k = _curve_grid(args)
    values = np.asarray(band_overlap(k, params), dtype=complex)
    write_curve_csv(args.out, k, values)
    print(f"wrote {args.samples} overlap samples to {args.out}")
    return 0


def _cmd_spec_validate(args) -> int:
    try:
        with open(args.file) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    try:
        spec, params = from_json_document(doc)
    except LatticeError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(
        f"ok: {len(spec.segments)} segments, {spec.n_sites} sites, "
        f"{spec.boundary.value} boundary, J={params.J} delta={params.delta} "
        f"gamma={params.gamma}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhls",
        description="Reproducible wave-packet experiments on gain/loss lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    p_run.add_argument("scenario", choices=scenario_ids())
    p_run.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a scenario parameter")
    p_run.add_argument("--out", default=None, help="artifact directory")
    p_run.set_defaults(func=_cmd_run)

    p_suite = sub.add_parser("suite", help="run all (or filtered) scenarios")
    p_suite.add_argument("--filter", default=None,
                         help="comma-separated scenario ids")
    p_suite.add_argument("--workers", type=int, default=1)
    p_suite.add_argument("--out", default=None, help="artifact root directory")
    p_suite.set_defaults(func=_cmd_suite)

    for name, func, blurb in (
        ("dispersion", _cmd_dispersion, "export a band-energy curve"),
        ("overlap", _cmd_overlap, "export the cross-band overlap curve"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--params", default="J=1,delta=0.5,gamma=0.5",
                       help="comma-separated J=..,delta=..,gamma=..")
        p.add_argument("--kmin", type=float, default=-np.pi)
        p.add_argument("--kmax", type=float, default=np.pi)
        p.add_argument("--samples", type=int, default=201)
        p.add_argument("--out", required=True, help="CSV path")
        if name == "dispersion":
            p.add_argument("--band", type=int, choices=(+1, -1), default=+1)
        p.set_defaults(func=func)

    p_spec = sub.add_parser("spec", help="lattice document tools")
    spec_sub = p_spec.add_subparsers(dest="spec_command", required=True)
    p_val = spec_sub.add_parser("validate", help="validate a lattice JSON document")
    p_val.add_argument("file")
    p_val.set_defaults(func=_cmd_spec_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
