"""
How a system factor shifts the selection
========================================

Four synthetic systems translate the same 10,000 target sentences. System A
keeps more of each in-domain sentence than the others, so plain
each-from-all already prefers it. Multiplying A's scores by a larger factor
(as the BLEU/TER/MTLD factor does for a stronger system) moves more targets
to A. The histogram shows where in the ranking each system's pairs land.
"""

import numpy as np

from btselect import compute_phi
from btselect.corpus import MultiSourcePool, Sentence
from btselect.ngrams import SeedNGramSet
from btselect.report import selection_histogram
from btselect.strategies import run_each_from_all, run_rescored

rng = np.random.default_rng(8)
words = np.array([f"w{i}" for i in range(3000)])

# %% Seed: sentences over the first 600 words ("in domain")
seed = SeedNGramSet.from_corpus([list(words[r]) for r in rng.integers(0, 600, size=(2000, 8))])

# %% Pool: each system keeps a share of an in-domain sentence, the rest is general vocabulary
base = rng.integers(0, 600, size=(10_000, 8))
sources = {}
for name, keep in {"A": 0.6, "B": 0.45, "C": 0.45, "D": 0.4}.items():
    mix = np.where(rng.random(base.shape) < keep, base, rng.integers(600, 3000, size=base.shape))
    sources[name] = tuple(Sentence(tuple(words[r]), i) for i, r in enumerate(mix))
pool = MultiSourcePool(tuple(Sentence((f"t{i}",), i) for i in range(10_000)), sources)

# %% Plain selection
plain = run_each_from_all(pool, seed)
print("plain   ", plain.per_system_counts)

# %% Factors from (made up) dev-set scores: phi = ln(BLEU * (100 - TER) * MTLD)
phis = {
    "A": compute_phi(32.0, 47.0, 54.0),
    "B": compute_phi(25.0, 55.0, 40.0),
    "C": compute_phi(24.0, 56.0, 41.0),
    "D": compute_phi(20.0, 60.0, 35.0),
}
print({s: round(v, 3) for s, v in phis.items()})
rescored = run_rescored(pool, seed, phis)
print("rescored", rescored.per_system_counts)

# %% A deliberately large boost for A
boosted = run_rescored(pool, seed, {"A": 1.5, "B": 1.0, "C": 1.0, "D": 1.0})
print("boosted ", boosted.per_system_counts)

# %% Where in the ranking does each system's share sit?
hist = selection_histogram(rescored, bin_size=2500)
for k, b in enumerate(hist.bins):
    print(f"ranks {k * 2500 + 1:>5}-{(k + 1) * 2500:>5}", dict(b))
