"""
Scale smoke test
================

FromAll over a synthetic pool of four systems with ``--n`` targets each,
selecting ``--n`` pairs. Sentences are short (2 to 6 tokens) and drawn from
a small Zipfian vocabulary; the seed is a separate sample of the same
distribution.

Prints build time, selection time and peak resident memory, and writes
them as JSON with ``--json``.
"""

import argparse
import json
import resource
import time

import numpy as np

from btselect.corpus import MultiSourcePool, Sentence
from btselect.ngrams import SeedNGramSet
from btselect.strategies import run_from_all

parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
parser.add_argument("--n", type=int, default=1_000_000, help="targets per system and pairs to select")
parser.add_argument("--systems", type=int, default=4)
parser.add_argument("--vocab", type=int, default=100)
parser.add_argument("--zipf", type=float, default=1.3)
parser.add_argument("--min-len", type=int, default=2)
parser.add_argument("--max-len", type=int, default=6)
parser.add_argument("--seed-size", type=int, default=10_000, help="seed sentences")
parser.add_argument("--json", help="write the measurements here")
args = parser.parse_args()

rng = np.random.default_rng(0)
vocab = [f"w{i}" for i in range(args.vocab)]


def corpus(n, shift=0):
    # Each system sees the same distribution over a rotated vocabulary, so
    # their frequent words differ and so do their overlaps with the seed.
    lens = rng.integers(args.min_len, args.max_len + 1, size=n)
    ids = ((rng.zipf(args.zipf, size=int(lens.sum())) - 1 + shift) % args.vocab).tolist()
    out, p = [], 0
    for i, n_tok in enumerate(lens.tolist()):
        out.append(Sentence(tuple(vocab[j] for j in ids[p : p + n_tok]), i))
        p += n_tok
    return tuple(out)


t0 = time.perf_counter()
pool = MultiSourcePool(
    corpus(args.n), {f"sys{k}": corpus(args.n, k) for k in range(args.systems)}
)
seed = SeedNGramSet.from_corpus([s.tokens for s in corpus(args.seed_size)])
build_s = time.perf_counter() - t0
print(f"pool {args.systems} x {args.n:,}, seed n-grams {len(seed):,}, built in {build_s:.1f} s", flush=True)

t1 = time.perf_counter()
result = run_from_all(pool, seed, args.n)
select_s = time.perf_counter() - t1
peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024

print(f"selected {len(result):,} pairs in {select_s:.1f} s (shortfall {result.shortfall:,})")
print(f"per system: {result.per_system_counts}")
print(f"peak RSS {peak_mb:.0f} MB")

if args.json:
    with open(args.json, "w") as f:
        json.dump({"n": args.n, "selected": len(result), "shortfall": result.shortfall,
                   "build_s": build_s, "select_s": select_s, "peak_rss_mb": peak_mb}, f, indent=2)
