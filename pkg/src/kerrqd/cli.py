"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, load_file, parse_config
from .presets import PRESETS, VERIFY_PRESETS, get_preset, list_presets
from .runner import VERIFY_SCHEMA, run_scenario, verify_scenario
from .states import ParameterError, TruncationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3


def _common(sp):
    sp.add_argument("--config", metavar="PATH", help="scenario file (JSON or YAML)")
    sp.add_argument("--preset", metavar="NAME", help="named scenario, see 'kerrqd presets'")
    sp.add_argument("--out", metavar="DIR", default="kerrqd-out", help="output directory")
    sp.add_argument("--format", choices=("csv", "json"), help="override the output format")
    sp.add_argument("--frame", choices=("lab", "rotating"), help="override the frame")
    sp.add_argument("--threads", metavar="N", type=int, default=1, help="threads for the Wigner kernel")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kerrqd", description="Quantum dot coupled to a Kerr cavity mode.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in (
        ("simulate", "time series of the configured observables"),
        ("carpet", "quantum carpet |psi(x, t)|^2"),
        ("wigner", "Wigner function of the field at the configured times"),
        ("verify", "compare the closed form with the brute-force oracle"),
    ):
        _common(sub.add_parser(name, help=text))
    sp = sub.add_parser("presets", help="list presets, or print one as JSON")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--all", action="store_true", help="include the verification suites")
    return ap


def _load(args) -> dict:
    if args.config and args.preset:
        raise ConfigError("", "give --config or --preset, not both")
    if args.config:
        data = load_file(args.config)
    elif args.preset:
        try:
            data = get_preset(args.preset)
        except KeyError:
            raise ConfigError("", f"unknown preset {args.preset!r}; try 'kerrqd presets'") from None
    else:
        raise ConfigError("", "need --config PATH or --preset NAME")
    if args.frame:
        data["frame"] = args.frame
    return data


def _cmd_presets(args) -> int:
    if args.name:
        try:
            print(json.dumps(get_preset(args.name), indent=2))
        except KeyError:
            print(f"error: unknown preset {args.name!r}", file=sys.stderr)
            return EXIT_CONFIG
        return EXIT_OK
    table = {**PRESETS, **VERIFY_PRESETS}
    for name in list_presets(include_verify=args.all):
        print(f"{name:16s} {table[name]['description']}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.config or args.preset:
        configs = [parse_config(_load(args))]
    else:
        configs = [parse_config(get_preset(n)) for n in VERIFY_PRESETS]
    doc = {"schema": VERIFY_SCHEMA, "suites": []}
    ok = True
    for cfg in configs:
        suite = {"name": cfg.name, "config_hash": cfg.config_hash(),
                 "tolerance": cfg.verify["tolerance"], "cases": []}
        for label, rep, passed in verify_scenario(cfg):
            ok &= passed
            print(f"{'PASS' if passed else 'FAIL'} {cfg.name}/{label}: max deviation {rep.worst:.3e} "
                  f"(dim {rep.dim}, limit {cfg.verify['tolerance']:g})")
            suite["cases"].append({"label": label, "passed": passed, **rep.to_dict()})
        doc["suites"].append(suite)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "verify.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "presets":
            return _cmd_presets(args)
        if args.threads < 1:
            raise ConfigError("--threads", "must be >= 1")
        if args.command == "verify":
            return _cmd_verify(args)
        cfg = parse_config(_load(args))
        only = None if args.command == "simulate" else args.command
        summary = run_scenario(cfg, args.out, fmt=args.format, threads=args.threads, only=only)
        for path in summary["outputs"]:
            print(Path(args.out) / path)
        return EXIT_OK
    except (ConfigError, ParameterError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
