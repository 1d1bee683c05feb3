"""Command-line interface.

Subcommands: check (one word, one detector), walk / batch (random
walks), exhaust / lemma (exhaustive searches), gap / bench (estimators).
Exit codes: 0 success (FREE / fully explored), 1 FORBIDDEN or
inconclusive exploration, 2 usage or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .core import ConfigError, ContractError, ExtendedExponent, index_from_word, text_from_letters
from . import detect
from .detect import DetectorKind, Patch, select_detector, default_patch
from . import search as S
from . import experiments as X

_DETECTOR_NAMES = {
    "small": DetectorKind.SMALL_GENERIC,
    "dict": DetectorKind.SMALL_DICT,
    "big": DetectorKind.BIG_FORWARD,
    "dual": DetectorKind.BIG_DUAL,
    "oracle": DetectorKind.ORACLE,
}


def _alpha(text: str) -> ExtendedExponent:
    return ExtendedExponent.parse(
        text, warn=lambda msg: print(f"warning: {msg}", file=sys.stderr))


def _resolve_detector(name: str, alpha, dual: bool, expected_depth: int):
    if name == "auto":
        return select_detector(alpha, dual=dual, expected_depth=expected_depth)
    kind = _DETECTOR_NAMES.get(name)
    if kind is None:
        raise ConfigError(f"unknown detector {name!r}")
    patch = default_patch(alpha) if kind is DetectorKind.SMALL_DICT else Patch.NONE
    return kind, patch


def _echo_config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_trace_csv(path, trace):
    with open(path, "w") as fh:
        fh.write("node_index,level\n")
        for i, lvl in enumerate(trace, start=1):
            fh.write(f"{i},{int(lvl)}\n")


def _write_histogram_csv(path, histogram):
    with open(path, "w") as fh:
        fh.write("length,count\n")
        for length, count in enumerate(histogram):
            fh.write(f"{length},{int(count)}\n")


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def cmd_check(args) -> int:
    alpha = _alpha(args.alpha)
    if args.word is not None:
        word_text = args.word
    else:
        with open(args.file) as fh:
            word_text = fh.read().strip()
    kind, patch = _resolve_detector(args.detector, alpha, args.dual,
                                    len(word_text))
    if args.dual and kind not in (DetectorKind.BIG_DUAL, DetectorKind.ORACLE):
        raise ConfigError("--dual needs the dual or oracle detector")
    if kind is DetectorKind.ORACLE:
        ok = detect.oracle_freeness(word_text, alpha, dual=args.dual,
                                    bound=max(len(word_text), 64), sigma=args.sigma)
        witness = None
    else:
        idx = index_from_word(word_text, args.sigma,
                              with_dictionary=kind is DetectorKind.SMALL_DICT)
        ok, witness = detect.run_detector(idx, kind, alpha, patch,
                                          want_witness=True)
    if ok:
        print("FREE")
        return 0
    if witness is not None:
        print(f"FORBIDDEN witness left={witness.left} right={witness.right} "
              f"i={witness.i} extra={witness.extra}")
    else:
        print("FORBIDDEN")
    return 1


def cmd_walk(args) -> int:
    alpha = _alpha(args.alpha)
    kind, patch = _resolve_detector(args.detector, alpha, args.dual, args.nodes)
    policy = S.BacktrackPolicy(enabled=args.backtrack)
    rep = S.random_walk(args.sigma, alpha, kind, patch, N=args.nodes,
                        seed=args.seed, policy=policy,
                        keep_trace=args.trace is not None,
                        depth_cap=args.depth_cap)
    if args.trace:
        _write_trace_csv(args.trace, rep.trace)
    payload = X.summary_json(args.sigma, alpha, kind, args.nodes, rep)
    payload["config"] = _echo_config(args)
    _write_json(args.report, payload)
    return 0


def cmd_batch(args) -> int:
    alpha = _alpha(args.alpha)
    kind, patch = _resolve_detector(args.detector, alpha, args.dual, args.nodes)
    policy = S.BacktrackPolicy(enabled=args.backtrack)
    summary = X.run_batch(args.sigma, alpha, kind, patch, N=args.nodes,
                          runs=args.runs, seed_base=args.seed, policy=policy,
                          depth_cap=args.depth_cap, jobs=args.jobs)
    payload = X.summary_json(args.sigma, alpha, kind, args.nodes, summary)
    payload["config"] = _echo_config(args)
    _write_json(args.report, payload)
    return 0


def cmd_exhaust(args) -> int:
    alpha = _alpha(args.alpha)
    kind, patch = _resolve_detector(args.detector, alpha, False, args.depth_cap)
    if args.resume and not S.checkpoint_matches(args.resume, args.sigma, alpha,
                                                kind, patch):
        raise ConfigError("resume checkpoint does not match this configuration")
    rep = S.exhaustive_search(args.sigma, alpha, kind, patch,
                              lexmin=args.lexmin, depth_cap=args.depth_cap,
                              checkpoint_path=args.checkpoint,
                              checkpoint_every=args.checkpoint_every,
                              resume_from=args.resume)
    return _emit_exhaust(args, alpha, kind, rep)


def cmd_lemma(args) -> int:
    k = args.sigma
    alpha = S.lemma_alpha(k)
    part = S.LemmaPart(args.part)
    kind, patch = _resolve_detector(args.detector, alpha, False, args.depth_cap)
    if args.resume and not S.checkpoint_matches(args.resume, k, alpha, kind, patch):
        raise ConfigError("resume checkpoint does not match this configuration")
    rep = S.lemma_search(k, part, kind, patch, depth_cap=args.depth_cap,
                         checkpoint_path=args.checkpoint,
                         checkpoint_every=args.checkpoint_every,
                         resume_from=args.resume, jobs=args.jobs)
    return _emit_exhaust(args, alpha, kind, rep)


def _emit_exhaust(args, alpha, kind, rep) -> int:
    if getattr(args, "histogram", None):
        _write_histogram_csv(args.histogram, rep.histogram)
    payload = X.summary_json(args.sigma, alpha, kind, 0, rep)
    payload["max_length"] = rep.ml
    payload["deepest"] = text_from_letters(rep.deepest or [])
    payload["config"] = _echo_config(args)
    _write_json(args.report, payload)
    return 0 if rep.exhausted and not rep.capped else 1


def cmd_gap(args) -> int:
    rows = []
    for l in args.l:
        mean = X.gap_estimate(args.sigma, l, args.samples, seed=args.seed)
        rows.append((l, mean))
    out = args.out
    lines = ["l,mean_delta"] + [f"{l},{m}" for l, m in rows]
    if out:
        with open(out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    return 0


def cmd_bench(args) -> int:
    alpha = _alpha(args.alpha)
    rows = X.dual_scaling_benchmark(args.n, args.samples, seed=args.seed,
                                    alpha=alpha)
    lines = ["n,mean_iterations,mean_seconds"]
    lines += [f"{r['n']},{r['mean_iterations']},{r['mean_seconds']}" for r in rows]
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    return 0


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

def _int_list(text: str):
    return [int(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="afree",
        description="Fractional Abelian repetition detection and "
                    "prefix-tree search over repetition-free languages.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, nodes=False):
        p.add_argument("--sigma", type=int, required=True,
                       help="alphabet size (2..10)")
        p.add_argument("--detector", default="auto",
                       choices=["auto", "small", "dict", "big", "dual", "oracle"])
        p.add_argument("--report", help="write the JSON summary here (default stdout)")

    p = sub.add_parser("check", help="test one word for alpha-A-freeness")
    common(p)
    p.add_argument("--alpha", required=True, help='exponent "p/q" or "p/q+"')
    p.add_argument("--word", help="word over letters a..j")
    p.add_argument("--file", help="read the word from a file instead")
    p.add_argument("--dual", action="store_true",
                   help="check dual freeness (reversal-based)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("walk", help="one randomized depth-first walk")
    common(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--nodes", type=int, required=True, help="node budget N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backtrack", action=argparse.BooleanOptionalAction,
                   default=True, help="forced-backtrack heuristic")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--depth-cap", type=int, default=None)
    p.add_argument("--trace", help="write node_index,level CSV here")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("batch", help="many independent walks, aggregated")
    common(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="seed base")
    p.add_argument("--backtrack", action=argparse.BooleanOptionalAction,
                   default=True)
    p.add_argument("--dual", action="store_true")
    p.add_argument("--depth-cap", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("exhaust", help="exhaustive (lexmin) enumeration")
    common(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--lexmin", action="store_true")
    p.add_argument("--depth-cap", type=int, default=S.DEPTH_CAP_DEFAULT)
    p.add_argument("--histogram", help="write length,count CSV here")
    p.add_argument("--checkpoint", help="periodic checkpoint path")
    p.add_argument("--checkpoint-every", type=int, default=100_000_000)
    p.add_argument("--resume", help="resume from this checkpoint")
    p.set_defaults(func=cmd_exhaust)

    p = sub.add_parser("lemma", help="three-part reduced finiteness search")
    common(p)
    p.add_argument("--part", required=True, choices=["L1", "L2", "L3"])
    p.add_argument("--depth-cap", type=int, default=4096)
    p.add_argument("--histogram")
    p.add_argument("--checkpoint")
    p.add_argument("--checkpoint-every", type=int, default=100_000_000)
    p.add_argument("--resume")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("gap", help="Parikh-domination gap estimator")
    p.add_argument("--sigma", type=int, required=True)
    p.add_argument("--l", type=_int_list, required=True,
                   help="prefix length(s), comma separated")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("bench", help="dual-detector scaling benchmark")
    p.add_argument("--alpha", default="7/3+")
    p.add_argument("--n", type=_int_list, required=True,
                   help="word length(s), comma separated")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, ContractError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
