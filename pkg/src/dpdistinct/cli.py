"""Command-line front end.

Subcommands: ``run`` replays a stream file and emits per-timestep CSV plus a
summary footer; ``gen`` writes stream files (random or the worst-case
blocklisting instance); ``trials`` drives the statistical suites. Output is
byte-identical across invocations with identical flags, files, and seed.
Figures are rendered to files only when a --plot path is given.
"""

from __future__ import annotations

import argparse
import sys

from . import countdistinct as cd
from .harness import check_approx, gen_hard_instance, gen_random_stream, ground_truth, score_blocklist
from .params import ConfigError, RunConfig, derive_params, threshold_base
from .stream import StreamValidityError
from .streamio import StreamFormatError, read_stream, write_stream
from .trials import run_suite


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # single diagnostic line, machine parseable
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    p = _Parser(prog="dpdistinct", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="replay a stream file")
    run_p.add_argument("--stream", required=True)
    run_p.add_argument("--rho", type=float, default=1.0)
    run_p.add_argument("--beta", type=float, default=0.1)
    run_p.add_argument("--eta", type=float, default=0.25)
    run_p.add_argument("--seed", type=int, required=True)
    bound = run_p.add_mutually_exclusive_group(required=True)
    bound.add_argument("--occ-bound", type=int, metavar="W")
    bound.add_argument("--no-bound", action="store_true")
    run_p.add_argument("--with-exact", action="store_true")
    run_p.add_argument("--mode", choices=("kset", "dict"), default="kset")
    run_p.add_argument("--noiseless", action="store_true")
    run_p.add_argument("--unsafe-test-mode", action="store_true")
    run_p.add_argument("--out")
    run_p.add_argument("--space-report", action="store_true")
    run_p.add_argument("--plot", metavar="PATH")

    gen_p = sub.add_parser("gen", help="write a stream file")
    gen_p.add_argument("--kind", choices=("random", "hard"), required=True)
    gen_p.add_argument("--T", type=int, required=True)
    gen_p.add_argument("--seed", type=int, required=True)
    gen_p.add_argument("--out", required=True)
    gen_p.add_argument("--universe", type=int, default=1024)
    gen_p.add_argument("--max-occ", type=int, default=8)
    gen_p.add_argument("--insert-bias", type=float, default=0.7)
    gen_p.add_argument("--blank-prob", type=float, default=0.05)
    gen_p.add_argument("--W", type=int, help="occurrency of the hard instance")

    tr_p = sub.add_parser("trials", help="run a statistical suite")
    tr_p.add_argument("--suite", choices=("accuracy", "coupling", "blocklist", "sensitivity", "space"), required=True)
    tr_p.add_argument("--trials", type=int, default=100)
    tr_p.add_argument("--seed", type=int, required=True)
    tr_p.add_argument("--k", type=int, help="capacity override (coupling suite)")
    tr_p.add_argument("--out")
    tr_p.add_argument("--plot", metavar="PATH")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args) -> int:
    if args.noiseless and not args.unsafe_test_mode:
        raise _UsageError("--noiseless disables privacy noise; it requires --unsafe-test-mode")
    stream, T, U = read_stream(args.stream)
    ob = args.occ_bound is not None
    cfg = RunConfig(
        T=T,
        rho=args.rho,
        beta=args.beta,
        eta=args.eta,
        ob=ob,
        W=args.occ_bound if ob else 0,
        universe_size=U,
    )
    params = derive_params(cfg)
    truth = ground_truth(stream)
    result = cd.run(stream, cfg, args.seed, mode=args.mode, noise_enabled=not args.noiseless)

    lines = []
    cols = "t,estimate,exact,chosen_level,n_too_high,blocklist_size" if args.with_exact else "t,estimate,chosen_level,n_too_high,blocklist_size"
    lines.append(cols)
    for rec, F, bl in zip(result.records, truth.F, result.blocklist_sizes):
        lvl = rec.chosen_level if rec.chosen_level is not None else -1
        if args.with_exact:
            lines.append(f"{rec.t},{rec.estimate!r},{F},{lvl},{rec.n_too_high},{bl}")
        else:
            lines.append(f"{rec.t},{rec.estimate!r},{lvl},{rec.n_too_high},{bl}")

    alpha = 1.0 + 4.0 * cfg.eta
    beta_add = 32.0 * threshold_base(cfg, params)
    errs = [abs(r.estimate - F) for r, F in zip(result.records, truth.F)]
    frac = sum(
        check_approx(r.estimate, F, alpha, beta_add).holds
        for r, F in zip(result.records, truth.F)
    ) / len(stream)
    score = score_blocklist(result.blocked_bits, truth, params.W_eff, result.entry_bits)
    lines.append(f"# max_additive_error={max(errs)!r}")
    lines.append(f"# approx_alpha={alpha!r} approx_beta_add={beta_add!r} approx_pass_fraction={frac!r}")
    lines.append(
        f"# blocklist_fn={score.false_negatives} blocklist_fp_steps={score.false_positives}"
        f" blocklist_fp_entries={score.fp_entries} blocklist_size={len(result.blocklist)}"
    )
    if args.space_report:
        sp = result.space
        lines.append(
            f"# space kset_cells={sp['kset_cells']} bm_registers={sp['bm_registers']}"
            f" blocklist_size={sp['blocklist_size']}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    if args.plot:
        from .plotting import plot_run

        plot_run(result, truth, args.plot)
    return 0


def _cmd_gen(args) -> int:
    if args.kind == "hard":
        if args.W is None:
            raise _UsageError("--kind hard requires --W")
        stream, _ = gen_hard_instance(args.T, args.W, args.seed)
        universe = args.T // 2
    else:
        stream = gen_random_stream(
            args.T,
            universe=args.universe,
            max_occ=args.max_occ,
            insert_bias=args.insert_bias,
            seed=args.seed,
            blank_prob=args.blank_prob,
        )
        universe = args.universe
    write_stream(args.out, stream, max(universe, 1))
    return 0


def _cmd_trials(args) -> int:
    res = run_suite(args.suite, args.trials, args.seed, k_override=args.k)
    lines = []
    if res.rows:
        cols = list(res.rows[0].keys())
        lines.append(",".join(cols))
        for row in res.rows:
            lines.append(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in cols))
    agg = " ".join(f"{k}={v!r}" for k, v in res.aggregate.items())
    lines.append(f"# suite={res.suite} verdict={res.verdict} {agg}")
    _emit("\n".join(lines) + "\n", args.out)
    if args.plot and res.rows:
        from .plotting import plot_trials

        metric_by_suite = {
            "accuracy": ("max_additive_error", None),
            "coupling": ("agree", None),
            "blocklist": ("fp_entries", res.aggregate.get("fp_bound")),
            "sensitivity": ("dist_sq", float(res.aggregate.get("bound", 0))),
            "space": ("ratio", 2.0),
        }
        col, bound = metric_by_suite[args.suite]
        plot_trials(col, [row[col] for row in res.rows], bound, args.plot)
    if not res.precondition_met:
        return 0  # no claim was made, so nothing failed
    return 0 if res.passed else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "gen":
            return _cmd_gen(args)
        return _cmd_trials(args)
    except _UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except StreamFormatError as exc:
        print(f"error: stream-format: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, StreamValidityError, cd.OccurrencyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
