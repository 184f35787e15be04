"""
Feature Decay selection, step by step
=====================================

A seed corpus stands in for the test domain. Every candidate pair is scored
by the seed n-grams its source side shares, and each n-gram's weight halves
whenever a selected sentence contains it. The pool is two systems'
translations of the same four target sentences.
"""

from btselect import SeedNGramSet, SelectedCounts, fda_score, select_greedy
from btselect.strategies import run_each_from_all, run_each_from_all_x4, run_from_all, run_rescored
from btselect.corpus import MultiSourcePool, Sentence

# %% The seed and a first score
seed = SeedNGramSet.from_corpus([["the", "red", "house"], ["a", "red", "door"]], order=3)
print(len(seed), "seed n-grams")

# "the red car" shares the, red and "the red": three occurrences over three tokens.
print(fda_score(["the", "red", "car"], seed))

# Once a sentence containing those n-grams is selected, each weighs 0.5.
counts = SelectedCounts(seed).add_selected(["the", "red", "car"])
print(fda_score(["the", "red", "car"], seed, counts))

# %% A small pool
def sentences(*lines):
    return tuple(Sentence(tuple(line.split()), i) for i, line in enumerate(lines))

pool = MultiSourcePool(
    targets=sentences("das rote haus", "eine rote tür", "ein hund", "die katze"),
    sources={
        "rbmt": sentences("the red home", "one red door", "a dog", "the cat"),
        "nmt": sentences("the red house", "a red door", "a dog", "the cat"),
    },
)

# %% from-all: the best pairs from the whole pool, several per target allowed
res = run_from_all(pool, seed, budget=5)
for r in res.records:
    print(r.rank, r.pair.system, r.pair.target_idx, round(r.score, 4), r.pair.source.text)

# %% each-from-all: exactly one source per target
res = run_each_from_all(pool, seed, rng_seed=0)
for r in res.records:
    print(r.rank, r.pair.system, r.pair.target_idx, round(r.score, 4))
print("fallback records:", res.n_fallback)

# x4 repeats that selection four times (the size of from-all with four systems).
print(len(run_each_from_all_x4(pool, seed)), "records in x4")

# %% Rescoring: a per-system factor multiplies every score
res = run_rescored(pool, seed, {"rbmt": 3.0, "nmt": 1.0})
print(res.per_system_counts)

# %% The same engine on bare candidate lists
print(select_greedy(list(pool.candidates()), seed, budget=2).pairs())
