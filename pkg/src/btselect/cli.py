"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 configuration error, 3 data error.
Log verbosity comes from ``BTSELECT_LOG`` (e.g. ``DEBUG``; default ``WARNING``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__
from .corpus import PoolManifest, load_corpus, load_pool
from .diversity import DiversityScores
from .errors import ConfigError, DataError
from .fda import SelectionResult
from .ngrams import DEFAULT_ORDER, SeedNGramSet
from .quality import evaluate
from .report import DEFAULT_BIN_SIZE, write_report
from .rescoring import SystemFactorTable, SystemMeasurement, build_factor_table
from .strategies import STRATEGIES, StrategyConfig, run_strategy

log = logging.getLogger("btselect")

EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG, EXIT_DATA = 0, 1, 2, 3


@dataclass
class RunConfig:
    strategy: str
    seed: str
    pool: str
    out: str
    budget: int | None = None
    factors: str | None = None
    order: int = DEFAULT_ORDER
    rng_seed: int = 0
    lowercase: bool = False
    distinct: bool = False
    threads: int = 1

    def validate(self) -> StrategyConfig:
        if self.order < 1:
            raise ConfigError("--order must be >= 1")
        if self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigError("--rng-seed must be a 64-bit unsigned integer")
        if self.strategy == "each-from-all-rs" and self.factors is None:
            raise ConfigError("strategy each-from-all-rs requires --factors")
        for flag, path in (("--seed", self.seed), ("--pool", self.pool), ("--factors", self.factors)):
            if path is not None and not os.path.isfile(path):
                raise ConfigError(f"{flag}: no such file {path}")
        # Factors are attached after loading; a placeholder keeps validation honest.
        return StrategyConfig(
            self.strategy, self.budget, self.rng_seed, {} if self.factors else None
        )


def cmd_select(args) -> int:
    config = RunConfig(
        strategy=args.strategy,
        seed=args.seed,
        pool=args.pool,
        out=args.out,
        budget=args.budget,
        factors=args.factors,
        order=args.order,
        rng_seed=args.rng_seed,
        lowercase=args.lowercase,
        distinct=args.distinct,
        threads=args.threads,
    )
    strategy = config.validate()
    start = time.perf_counter()
    factors = SystemFactorTable.read(config.factors) if config.factors else None
    seed_corpus = load_corpus(config.seed, "skip", config.lowercase)
    if not seed_corpus:
        raise DataError(f"seed {config.seed} has no sentences")
    seed = SeedNGramSet.from_corpus(seed_corpus, config.order)
    pool = load_pool(PoolManifest.read(config.pool), config.lowercase, config.threads)
    log.info("pool: %d targets x %d systems; seed: %d n-grams", len(pool), len(pool.sources), len(seed))
    if factors is not None:
        strategy = StrategyConfig(strategy.kind, strategy.budget, strategy.rng_seed, factors.phis())
    result = run_strategy(pool, seed, strategy, distinct=config.distinct)

    os.makedirs(config.out, exist_ok=True)
    result.write_tsv(os.path.join(config.out, "selection.tsv"))
    summary = {
        "tool": "btselect",
        "version": __version__,
        "config": asdict(config),
        "n_records": len(result),
        "per_system_counts": result.per_system_counts,
        "shortfall": result.shortfall,
        "n_fallback": result.n_fallback,
        "wall_time_s": round(time.perf_counter() - start, 3),
    }
    with open(os.path.join(config.out, "summary.json"), "w", encoding="utf-8", newline="\n") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")
    if result.shortfall:
        print(f"warning: budget short by {result.shortfall} pairs", file=sys.stderr)
    return EXIT_OK


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=None if out is None else 2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def cmd_evaluate(args) -> int:
    hyp = load_corpus(args.hyp, "keep", args.lowercase)
    ref = load_corpus(args.ref, "keep", args.lowercase)
    if len(hyp) != len(ref):
        raise DataError(f"{args.hyp} has {len(hyp)} lines but {args.ref} has {len(ref)}")
    try:
        scores = evaluate(hyp, ref)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    _emit(scores.rounded(4), args.out)
    return EXIT_OK


def cmd_diversity(args) -> int:
    doc = load_corpus(args.corpus, "skip", args.lowercase)
    if not 0.0 < args.threshold < 1.0:
        raise ConfigError("--threshold must lie strictly between 0 and 1")
    try:
        scores = DiversityScores.of(doc, args.threshold)
    except ValueError as exc:
        raise DataError(f"{args.corpus}: {exc}") from None
    _emit(scores.to_json(4), args.out)
    return EXIT_OK


def _parse_assignment(text: str) -> tuple[str, str]:
    name, sep, path = text.partition("=")
    if not sep or not name or not path:
        raise ConfigError(f"expected NAME=PATH, got {text!r}")
    return name, path


def cmd_rescore_factors(args) -> int:
    if args.supplied:
        if args.dev_hyp or args.ref or args.pool:
            raise ConfigError("--supplied cannot be combined with --ref/--pool/--dev-hyp")
        table = SystemFactorTable.read(args.supplied)
    else:
        if not (args.ref and args.pool and args.dev_hyp):
            raise ConfigError("computed mode needs --ref, --pool and one --dev-hyp per system")
        manifest = PoolManifest.read(args.pool)
        bt = dict(manifest.systems)
        hyps = dict(_parse_assignment(a) for a in args.dev_hyp)
        if set(hyps) != set(bt):
            raise ConfigError(
                f"--dev-hyp systems {sorted(hyps)} do not match pool systems {sorted(bt)}"
            )
        table = build_factor_table(
            [SystemMeasurement(name, hyps[name], bt[name]) for name, _ in manifest.systems],
            args.ref,
            args.lowercase,
        )
    if args.out:
        table.write(args.out)
    else:
        _emit(table.to_json(), None)
    return EXIT_OK


def cmd_report(args) -> int:
    if args.bin_size < 1:
        raise ConfigError("--bin-size must be >= 1")
    pool = load_pool(PoolManifest.read(args.pool), args.lowercase) if args.pool else None
    result = SelectionResult.read_tsv(args.selection, pool.systems if pool else None)
    devset = load_corpus(args.devset, "skip", args.lowercase) if args.devset else None
    write_report(args.out, result, pool, devset, args.bin_size)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="btselect",
        description="FDA data selection over multi-system backtranslated corpora.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("select", help="select sentence pairs from a pool")
    s.add_argument("--strategy", required=True, choices=STRATEGIES)
    s.add_argument("--seed", required=True, help="seed corpus (e.g. devset source side)")
    s.add_argument("--pool", required=True, help="pool manifest (JSON)")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--budget", type=int, help="number of pairs (from-all only)")
    s.add_argument("--factors", help="factor table JSON (each-from-all-rs only)")
    s.add_argument("--order", type=int, default=DEFAULT_ORDER, help="max n-gram order")
    s.add_argument("--rng-seed", type=int, default=0)
    s.add_argument("--distinct", action="store_true", help="count each shared n-gram once per sentence")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_select)

    e = sub.add_parser("evaluate", help="corpus BLEU, TER and chrF3")
    e.add_argument("--hyp", required=True)
    e.add_argument("--ref", required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_evaluate)

    d = sub.add_parser("diversity", help="TTR, Yule's I and MTLD of a corpus")
    d.add_argument("corpus")
    d.add_argument("--threshold", type=float, default=0.72)
    d.add_argument("--out")
    d.set_defaults(func=cmd_diversity)

    r = sub.add_parser("rescore-factors", help="build the per-system factor table")
    r.add_argument("--ref", help="devset reference (source language)")
    r.add_argument("--pool", help="pool manifest; its sources are the backtranslated corpora")
    r.add_argument("--dev-hyp", action="append", default=[], metavar="NAME=PATH",
                   help="a system's translation of the devset; repeat per system")
    r.add_argument("--supplied", help="JSON with raw bleu/ter/mtld per system")
    r.add_argument("--out")
    r.set_defaults(func=cmd_rescore_factors)

    rp = sub.add_parser("report", help="histograms, length and diversity tables")
    rp.add_argument("--selection", required=True, help="selection.tsv from `select`")
    rp.add_argument("--pool", help="pool manifest")
    rp.add_argument("--devset")
    rp.add_argument("--bin-size", type=int, default=DEFAULT_BIN_SIZE)
    rp.add_argument("--out", required=True)
    rp.set_defaults(func=cmd_report)

    for sp in (s, e, d, r, rp):
        sp.add_argument("--lowercase", action="store_true", help="lowercase all tokens on input")
    return p


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("BTSELECT_LOG", "WARNING").upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"btselect: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, UnicodeDecodeError) as exc:
        print(f"btselect: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"btselect: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"btselect: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
