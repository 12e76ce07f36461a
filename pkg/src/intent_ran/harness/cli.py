"""Command-line entry point: ``intent-ran <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from ..errors import IntentRanError
from ..intent_codec import intent_to_json
from ..ransim.sim import init_scenario, step, write_metrics_csv
from ..sig import DecompositionResult, load_sig_json
from .config import ExperimentConfig, load_config
from .experiment import SCHEMES, bench_decomposition, decompose_files, run_experiment, write_bench_csv

__all__ = ["EXIT_OK", "EXIT_UNSATISFIED", "EXIT_INVALID", "main"]

EXIT_OK = 0
EXIT_UNSATISFIED = 1
EXIT_INVALID = 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="TOML experiment config")
    p.add_argument("--seed", type=int, help="override the first configured seed")
    p.add_argument("--paper-scale", action="store_true", help="40 BSs, 320 UEs, 1000-step episodes")
    p.add_argument("--out", type=Path, help="output directory (INTENT_RAN_OUT takes precedence)")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intent-ran", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decompose an intent against a SIG model")
    _common(p)
    p.add_argument("--intent", type=Path, help="intent YAML or JSON")
    p.add_argument("--sig", type=Path, help="SIG model JSON")
    p.add_argument("--no-conflict", action="store_true", help="skip conflict analysis and pruning")
    p.add_argument("--threshold", type=float, help="softgoal satisfaction threshold")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of text")

    p = sub.add_parser("bench", help="time the per-BS decomposition loop")
    _common(p)
    p.add_argument("--m", type=int, nargs="+", default=[5, 10, 20, 40], help="network sizes")
    p.add_argument("--reps", type=int, default=21)
    p.add_argument("--no-conflict", action="store_true", help="only benchmark the no-conflict mode")

    p = sub.add_parser("simulate", help="run the simulator with no operations and write metrics")
    _common(p)
    p.add_argument("--steps", type=int, default=100, help="decision steps to simulate")

    for name, text in (("train", "train one scheme"), ("evaluate", "run several schemes and compare")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--scheme", choices=SCHEMES, action="append", help="scheme(s) to run")
        p.add_argument("--no-conflict", action="store_true", help="shorthand for --scheme dqn_no_conflict")
        p.add_argument("--episodes", type=int, help="override the number of episodes")
    return parser


def _config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config)
    if args.paper_scale:
        cfg = cfg.paper_scale()
    if args.seed is not None:
        cfg = cfg.with_overrides(seeds=(args.seed, *[s for s in cfg.seeds if s != args.seed]))
    if args.out is not None:
        cfg = cfg.with_overrides(output_dir=args.out)
    return cfg


def _human_report(result: DecompositionResult) -> str:
    s = result.scores
    lines = [
        f"softgoal score   {s.softgoal_score:.4f} (threshold {result.threshold:g}) -> "
        + ("satisfied" if result.satisfied else "NOT satisfied"),
        "objective scores " + ", ".join(f"{v:.3f}" for v in s.objective_scores),
        f"conflicts        {len(result.conflicts)}" + ("" if result.with_conflict else " (analysis disabled)"),
    ]
    lines += [f"  {a} <-> {b}  [{why}]" for a, b, why in result.conflicts.pairs]
    lines.append(f"operations       {len(result.pruned_ops)} kept of {len(result.operations)}")
    lines += [f"  {label:<22} {score:+.3f}" for label, score in result.pruned_ops]
    return "\n".join(lines)


def cmd_decompose(args: argparse.Namespace) -> int:
    cfg = _config(args)
    overrides = {}
    if args.intent is not None:
        overrides["intent_path"] = args.intent
    if args.sig is not None:
        overrides["sig_model_path"] = args.sig
    if args.threshold is not None:
        overrides["threshold"] = args.threshold
    cfg = cfg.with_overrides(**overrides)
    doc, result, elapsed = decompose_files(cfg, with_conflict=not args.no_conflict)
    report = {**result.to_report(), "intent": json.loads(intent_to_json(doc))}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    out = cfg.resolved_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    (out / "decomposition_report.json").write_text(text, encoding="utf-8")
    print(text if args.json else _human_report(result), end="" if args.json else "\n")
    return EXIT_OK if result.satisfied else EXIT_UNSATISFIED


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _config(args)
    cfg.check_paths()
    intent_text = Path(cfg.intent_path).read_text(encoding="utf-8")
    model = load_sig_json(Path(cfg.sig_model_path).read_text(encoding="utf-8"))
    modes = (False,) if args.no_conflict else (True, False)
    rows = []
    for mode in modes:
        rows += bench_decomposition(args.m, args.reps, mode, intent_text, model, cfg.conflict_rules)
    out = cfg.resolved_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "bench_decomposition.csv", "w", encoding="utf-8", newline="") as fh:
        write_bench_csv(rows, fh)
    for m, mode, med, _ in rows:
        print(f"M={m:<4} {'conflict' if mode else 'no-conflict':<12} median {med * 1e3:.3f} ms")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    state = init_scenario(cfg.scenario.with_overrides(rng_seed=cfg.seeds[0]))
    metrics = []
    for _ in range(args.steps):
        state, m = step(state, cfg.hp.step_ms)
        metrics.append(m)
    out = cfg.resolved_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"simulate_seed{cfg.seeds[0]}_metrics.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_metrics_csv(metrics, fh)
    print(f"wrote {len(metrics)} ticks x {cfg.scenario.num_bs} BSs to {path}")
    return EXIT_OK


def _schemes(args: argparse.Namespace, default: Sequence[str]) -> list[str]:
    chosen = list(args.scheme or [])
    if args.no_conflict:
        chosen.append("dqn_no_conflict")
    return list(dict.fromkeys(chosen)) or list(default)


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _config(args)
    for scheme in _schemes(args, ["dqn"]):
        summary, _ = run_experiment(cfg, scheme, cfg.seeds[0], args.episodes)
        print(summary.to_json(), end="")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    results = []
    for seed in cfg.seeds:
        for scheme in _schemes(args, SCHEMES):
            summary, _ = run_experiment(cfg, scheme, seed, args.episodes)
            results.append(json.loads(summary.to_json()))
            print(
                f"{scheme:<16} seed={seed:<4} energy={summary.mean_energy_w:9.1f} W  "
                f"thpt={summary.mean_thpt_bps / 1e6:7.2f} Mb/s  latency={summary.mean_latency_ms:.3f} ms  "
                f"reward={summary.cumulative_reward:10.2f}"
            )
    out = cfg.resolved_output_dir()
    (out / "evaluation.json").write_text(json.dumps(results, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


_COMMANDS = {
    "decompose": cmd_decompose,
    "bench": cmd_bench,
    "simulate": cmd_simulate,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except IntentRanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
