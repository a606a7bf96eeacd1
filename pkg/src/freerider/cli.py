"""Command line front end: synth -> mine -> screen -> eval, plus selfcheck."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

from . import core, edp, evaluate, miner, synth

log = logging.getLogger("freerider")

D1_TEXT = "# length=5\n1\ta\n2\tb\n3\ta,c\n4\tb\n5\tc\n"
D1_EXPECTED = {"a": 1.28, "b": 1.04, "": 0.86173696}
D1_LIFT = 1.5625


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _non_negative_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _probability(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a probability, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def read_config(path) -> dict[str, str]:
    """``key=value`` lines; ``#`` starts a comment; keys use flag names."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_synth(args) -> int:
    cfg = synth.SynConfig(n=args.n, plant_abc=args.plant_abc, plant_defg=args.plant_defg,
                          gap_mean=args.gap_mean, gap_std=args.gap_std, p_noise=args.p_noise,
                          filler_rate=args.filler_rate, seed=args.seed)
    data = synth.generate_syn(cfg)
    core.write_sequence(data.sequence, args.out)
    if args.truth_out:
        core.write_episode_list([(ep, None) for ep in data.truth], args.truth_out)
    log.info("wrote %s (n=%d, %.3f events/timestamp)", args.out, cfg.n,
             data.sequence.mean_events_per_timestamp())
    return 0


def cmd_mine(args) -> int:
    seq = core.read_sequence(args.input)
    t0 = time.perf_counter()
    F = miner.mine_frequent(seq, args.min_sup, args.max_window, args.max_len, workers=args.workers)
    if args.top_k is not None:
        F = miner.top_k_by_support(F, args.top_k, seq.alphabet)
    core.write_episode_list([(ep.labels(seq.alphabet), sup) for ep, sup in F], args.out)
    log.info("mined %d episodes in %.2fs", len(F), time.perf_counter() - t0)
    return 0


def cmd_screen(args) -> int:
    seq = core.read_sequence(args.input)
    alphabet = seq.alphabet
    F = []
    for labels, sup in core.read_episode_list(args.episodes):
        try:
            F.append((core.Episode(tuple(alphabet.id(lab) for lab in labels)), sup))
        except KeyError as exc:
            raise ValueError(f"episode {'->'.join(labels)}: {exc.args[0]}") from None
    t0 = time.perf_counter()
    records = edp.screen(F, seq, min_lift=args.min_lift, workers=args.workers, mode=args.mode,
                         baseline=args.baseline, parallel=args.parallel, delta=args.max_window)
    log.info("screened %d episodes in %.2fs, %d kept", len(records), time.perf_counter() - t0,
             sum(r.kept for r in records))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            row = rec.to_json(alphabet)
            if args.mc_check and rec.best_partition is not None:
                model = edp.GenerativeModel(rec.best_partition, seq)
                est, se = edp.expected_support_mc(rec.episode, model, args.mc_check, seed=args.mc_seed,
                                                  delta=args.mc_window)
                row["mc_exp_sup"] = est
                row["mc_se"] = se
                if args.mc_window is None and abs(est - rec.exp_sup) > 4 * se:
                    log.warning("%s: exact %.4f vs sampled %.4f +- %.4f", row["episode"], rec.exp_sup, est, se)
            fh.write(json.dumps(row) + "\n")
    return 0


def cmd_eval(args) -> int:
    truth = [labels for labels, _ in core.read_episode_list(args.truth)]
    reports = {}
    for spec in args.report:
        name, sep, path = spec.partition("=")
        if not sep:
            name, path = Path(spec).stem, spec
        reports[name] = evaluate.kept_ranking(evaluate.read_report(path))
    table = evaluate.compare_methods(reports, truth, args.k_max)
    print(evaluate.format_table(table))
    if args.out:
        Path(args.out).write_text(json.dumps(table, indent=2) + "\n", encoding="utf-8")
    return 0


def run_selfcheck(expected: dict[str, float] | None = None, lift: float = D1_LIFT,
                  out=sys.stdout) -> bool:
    """D1 oracle values plus normalisation checks; True when everything holds."""
    import itertools

    expected = D1_EXPECTED if expected is None else expected
    seq = core.parse_sequence(D1_TEXT)
    A = seq.alphabet
    alpha = core.Episode.parse("a->b", A)
    ok = True

    def report(name, passed, detail=""):
        nonlocal ok
        ok &= passed
        print(f"[{'PASS' if passed else 'FAIL'}] {name} {detail}".rstrip(), file=out)

    for part in edp.enumerate_partitions(alpha):
        key = "".join(part.labels(A))
        value = edp.expected_support_exact(alpha, edp.GenerativeModel(part, seq))
        want = expected.get(key)
        report(f"E[sp(a->b)] I={{{','.join(part.labels(A))}}}",
               want is not None and abs(value - want) <= 1e-9, f"{value:.10g} vs {want}")

    rec = edp.exp_sup(alpha, seq, delta=5)
    report("lift(a->b)", rec.support == 2 and abs(rec.lift - lift) <= 1e-9, f"{rec.lift:.10g} vs {lift}")

    worst = 0.0
    for part in edp.enumerate_partitions(alpha):
        model = edp.GenerativeModel(part, seq)
        rnd = sorted(part.random)
        for t in range(1, seq.length + 1):
            fixed = seq.at(t) & part.informative
            total = math.fsum(
                model.eventset_gen_prob(fixed | {e for e, on in zip(rnd, bits) if on}, t)
                for bits in itertools.product((0, 1), repeat=len(rnd))
            )
            worst = max(worst, abs(total - 1.0))
    report("event-set normalisation", worst <= 1e-9, f"max deviation {worst:.2e}")
    return ok


def cmd_selfcheck(args) -> int:
    return 0 if run_selfcheck() else 1


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

REQUIRED = {
    "synth": ("out",),
    "mine": ("input", "out"),
    "screen": ("input", "episodes", "out"),
    "eval": ("report", "truth"),
    "selfcheck": (),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freerider", description="Free-rider episode screening with dual-partition null models.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    p.add_argument("--config", help="key=value file supplying defaults for the chosen command")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    s = sub.add_parser("synth", help="generate the SYN benchmark sequence")
    s.add_argument("--n", type=_positive_int, default=10_000, help="sequence length")
    s.add_argument("--seed", type=int, default=0, help="RNG seed")
    s.add_argument("--p-noise", type=_probability, default=0.3, help="per-timestamp probability of the noise event X")
    s.add_argument("--plant-abc", type=_non_negative_int, default=300, help="copies of a->b->c")
    s.add_argument("--plant-defg", type=_non_negative_int, default=300, help="copies of d->e->f->g")
    s.add_argument("--gap-mean", type=float, default=2.0, help="mean of the d..g gap normal")
    s.add_argument("--gap-std", type=_positive_float, default=2.0, help="std of the d..g gap normal")
    s.add_argument("--filler-rate", type=_probability, default=0.9, help="probability a timestamp gets one filler event")
    s.add_argument("--out", help="sequence file to write")
    s.add_argument("--truth-out", help="ground-truth episode file to write")
    s.set_defaults(func=cmd_synth)

    m = sub.add_parser("mine", help="mine frequent serial episodes")
    m.add_argument("--input", help="sequence file")
    m.add_argument("--min-sup", type=_positive_int, default=200, help="minimum minimal-occurrence support")
    m.add_argument("--max-window", type=_positive_int, default=12, help="window bound delta (end - start < delta)")
    m.add_argument("--max-len", type=int, default=miner.DEFAULT_MAX_LEN, help="longest episode to mine")
    m.add_argument("--top-k", type=_non_negative_int, help="keep only the k most frequent episodes")
    m.add_argument("--workers", type=_positive_int, default=1, help="worker processes")
    m.add_argument("--out", help="episode list file to write")
    m.set_defaults(func=cmd_mine)

    c = sub.add_parser("screen", help="compute Lift and screen free-rider episodes")
    c.add_argument("--input", help="sequence file")
    c.add_argument("--episodes", help="episode list file (supports optional)")
    c.add_argument("--min-lift", type=_positive_float, default=1.0, help="Lift threshold")
    c.add_argument("--workers", type=_positive_int, default=1, help="worker processes")
    c.add_argument("--mode", choices=edp.MODES, default=edp.FULL, help="enumerate all partitions or stop at a witness")
    c.add_argument("--parallel", choices=("episodes", "partitions"), default="episodes",
                   help="unit of work handed to workers (partitions implies full enumeration)")
    c.add_argument("--baseline", choices=("ind",), help="use only the all-random partition")
    c.add_argument("--max-window", type=_positive_int, default=12,
                   help="window bound for episodes listed without a support")
    c.add_argument("--mc-check", type=_non_negative_int, default=0, metavar="N",
                   help="also estimate each best-partition expectation from N sampled sequences")
    c.add_argument("--mc-seed", type=int, default=0, help="seed for --mc-check")
    c.add_argument("--mc-window", type=_positive_int, help="window bound used by --mc-check sampling")
    c.add_argument("--out", help="JSON-lines report to write")
    c.set_defaults(func=cmd_screen)

    e = sub.add_parser("eval", help="precision@k of screening reports")
    e.add_argument("--report", action="append", metavar="[NAME=]PATH",
                   help="report file; repeat for several methods")
    e.add_argument("--truth", help="ground-truth episode file")
    e.add_argument("--k-max", type=_positive_int, default=15, help="largest k")
    e.add_argument("--out", help="metrics JSON file to write")
    e.set_defaults(func=cmd_eval)

    k = sub.add_parser("selfcheck", help="run the built-in oracle checks")
    k.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        cfg = read_config(args.config)
        if "report" in cfg:
            cfg["report"] = cfg["report"].split(",")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    missing = [f"--{name.replace('_', '-')}" for name in REQUIRED[args.command] if getattr(args, name) in (None, [])]
    if missing:
        parser.error(f"{args.command}: missing required option(s) {', '.join(missing)}")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
