"""
Quality and diversity measures
==============================

BLEU, TER and chrF3 compare hypotheses with references; TTR, Yule's I and
MTLD describe a single corpus. These are the inputs to the system factor.
"""

from btselect import DiversityScores, corpus_bleu, corpus_chrf3, corpus_ter, evaluate
from btselect.quality import ter_edits

ref = [["the", "cat", "sat", "on", "the", "mat"], ["it", "was", "a", "sunny", "day"]]
hyp = [["the", "cat", "sat", "on", "mat"], ["a", "sunny", "day", "it", "was"]]

# %% Corpus scores
print(evaluate(hyp, ref).rounded(2))

# %% The brevity penalty: a perfect but short hypothesis
print(corpus_bleu([["a", "b", "c", "d"]], [["a", "b", "c", "d", "e"]]))  # 100 * exp(-1/4)

# %% TER counts a block move as one edit
print(ter_edits("a sunny day it was", "it was a sunny day"))  # (edits, reference length)
print(ter_edits("a sunny day it was", "it was a sunny day", shifts=False))
print(corpus_ter(hyp, ref), corpus_chrf3(hyp, ref))

# %% Diversity of a tiny corpus
print(DiversityScores.of([["a", "a", "b"]]).to_json())
# No repeated word: Yule's I is infinite, and MTLD has no complete factor.
print(DiversityScores.of([["a", "b", "c"]]).to_json())
