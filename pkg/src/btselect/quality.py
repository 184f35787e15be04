"""Corpus-level BLEU, chrF3 and TER on pre-tokenized text.

All three metrics aggregate sufficient statistics over the corpus before
computing the final score, so the order of the pairs does not matter.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .corpus import Sentence, as_tokens

BLEU_ORDER = 4
CHRF_ORDER = 6
CHRF_BETA = 3.0

# Standard TER search limits.
MAX_SHIFT_SIZE = 10
MAX_SHIFT_DIST = 50
MAX_SHIFT_CANDIDATES = 1000

Text = Sentence | Sequence[str] | str


@dataclass(frozen=True)
class QualityScores:
    bleu: float
    ter: float
    chrf3: float

    def rounded(self, digits: int = 4) -> dict[str, float]:
        return {k: round(v, digits) for k, v in vars(self).items()}


def _pairs(hypotheses: Sequence[Text], references: Sequence[Text]):
    if len(hypotheses) != len(references):
        raise ValueError(
            f"{len(hypotheses)} hypotheses but {len(references)} references"
        )
    if not hypotheses:
        raise ValueError("cannot score an empty corpus")
    out = []
    for i, (h, r) in enumerate(zip(hypotheses, references)):
        ref = as_tokens(r)
        if not ref:
            raise ValueError(f"reference {i} is empty")
        out.append((as_tokens(h), ref))
    return out


# --------------------------------------------------------------------- BLEU


def bleu_stats(hyp: Sequence[str], ref: Sequence[str], order: int = BLEU_ORDER) -> list[int]:
    """``[hyp_len, ref_len, match_1, total_1, ..., match_n, total_n]``."""
    stats = [len(hyp), len(ref)]
    for n in range(1, order + 1):
        h = Counter(tuple(hyp[i : i + n]) for i in range(len(hyp) - n + 1))
        r = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
        stats.append(sum(min(c, r[g]) for g, c in h.items()))
        stats.append(max(0, len(hyp) - n + 1))
    return stats


def bleu_from_stats(stats: Sequence[int], smooth: bool = False) -> float:
    hyp_len, ref_len = stats[0], stats[1]
    order = (len(stats) - 2) // 2
    log_sum = 0.0
    for n in range(1, order + 1):
        match, total = stats[2 * n], stats[2 * n + 1]
        if smooth and n > 1:
            match, total = match + 1, total + 1
        if match == 0 or total == 0:
            return 0.0
        log_sum += math.log(match / total)
    if hyp_len == 0:
        return 0.0
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * bp * math.exp(log_sum / order)


def corpus_bleu(
    hypotheses: Sequence[Text], references: Sequence[Text], smooth: bool = False
) -> float:
    """Corpus BLEU with up to 4-grams and brevity penalty, in [0, 100].

    Without ``smooth`` the score is 0 as soon as one n-gram order has no
    match. ``smooth`` adds one to matches and totals for orders 2 and up.
    """
    total = [0] * (2 + 2 * BLEU_ORDER)
    for hyp, ref in _pairs(hypotheses, references):
        for i, v in enumerate(bleu_stats(hyp, ref)):
            total[i] += v
    return bleu_from_stats(total, smooth)


# -------------------------------------------------------------------- chrF


def _char_ngrams(tokens: Sequence[str], n: int) -> Counter:
    text = "".join(tokens)
    return Counter(text[i : i + n] for i in range(len(text) - n + 1))


def chrf_stats(hyp: Sequence[str], ref: Sequence[str], order: int = CHRF_ORDER) -> list[int]:
    """``[hyp_count, ref_count, match]`` per character n-gram order, flattened."""
    stats = []
    for n in range(1, order + 1):
        h = _char_ngrams(hyp, n)
        r = _char_ngrams(ref, n)
        # Hypothesis n-grams of an order the reference lacks are not counted.
        stats += [sum(h.values()) if r else 0, sum(r.values()), sum((h & r).values())]
    return stats


def chrf_from_stats(stats: Sequence[int], beta: float = CHRF_BETA) -> float:
    # Precision and recall are averaged over the orders both sides have
    # n-grams for, then combined into one F-score.
    b2 = beta * beta
    prec = rec = 0.0
    effective = 0
    for i in range(0, len(stats), 3):
        n_hyp, n_ref, n_match = stats[i : i + 3]
        if n_hyp > 0 and n_ref > 0:
            prec += n_match / n_hyp
            rec += n_match / n_ref
            effective += 1
    if not effective:
        return 0.0
    prec /= effective
    rec /= effective
    if prec + rec == 0:
        return 0.0
    return 100.0 * (1 + b2) * prec * rec / (b2 * prec + rec)


def corpus_chrf3(hypotheses: Sequence[Text], references: Sequence[Text]) -> float:
    """Character 1..6-gram F-score with beta=3, whitespace removed, in [0, 100]."""
    total = [0] * (3 * CHRF_ORDER)
    for hyp, ref in _pairs(hypotheses, references):
        for i, v in enumerate(chrf_stats(hyp, ref)):
            total[i] += v
    return chrf_from_stats(total)


# --------------------------------------------------------------------- TER


def _edit_alignment(hyp: Sequence[str], ref: Sequence[str]):
    """Word Levenshtein distance plus the alignment of one optimal path.

    Returns ``(distance, hyp_err, ref_err, ref_to_hyp)`` where ``*_err``
    flag words not exactly matched on the path and ``ref_to_hyp`` maps each
    ref position to the hyp position it is matched or substituted with, or
    for an inserted ref word, to the hyp position just before it (-1 at the
    start).
    """
    n, m = len(hyp), len(ref)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        row, prev = d[i], d[i - 1]
        row[0] = i
        h = hyp[i - 1]
        for j in range(1, m + 1):
            cost = prev[j - 1] + (h != ref[j - 1])
            if prev[j] + 1 < cost:
                cost = prev[j] + 1
            if row[j - 1] + 1 < cost:
                cost = row[j - 1] + 1
            row[j] = cost

    hyp_err = [1] * n
    ref_err = [1] * m
    ref_to_hyp = {}
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            same = hyp[i - 1] == ref[j - 1]
            if d[i][j] == d[i - 1][j - 1] + (not same):
                if same:
                    hyp_err[i - 1] = ref_err[j - 1] = 0
                ref_to_hyp[j - 1] = i - 1
                i, j = i - 1, j - 1
                continue
        if i > 0 and (j == 0 or d[i][j] == d[i - 1][j] + 1):
            i -= 1
        else:
            ref_to_hyp[j - 1] = i - 1
            j -= 1
    return d[n][m], hyp_err, ref_err, ref_to_hyp


def edit_distance(hyp: Sequence[str], ref: Sequence[str]) -> int:
    return _edit_alignment(hyp, ref)[0]


def move_block(words: Sequence[str], start: int, length: int, dest: int) -> list[str]:
    """Move ``words[start:start+length]`` to ``dest``, tercom style.

    ``dest`` counts positions in the original sequence when it lies outside
    the block, so the block ends up just before original word ``dest``.
    Inside ``[start, start+length]`` it counts positions in the sequence
    with the block removed.
    """
    block = list(words[start : start + length])
    rest = list(words[:start]) + list(words[start + length :])
    pos = dest - length if dest > start + length else dest
    return rest[:pos] + block + rest[pos:]


def _best_shift(hyp, ref, ref_spans, budget):
    """Best single shift and the number of candidates it cost to find it.

    Scans hyp start, then ref start, then block length. A block must hold a
    hyp error, cover a ref error and not contain the hyp word aligned to its
    ref start. Candidates rank by (gain, length, -start, -dest).
    """
    dist, hyp_err, ref_err, ref_to_hyp = _edit_alignment(hyp, ref)
    best = None
    checked = 0
    n, m = len(hyp), len(ref)
    for h in range(n):
        for r in ref_spans.get(hyp[h], ()):
            if abs(h - r) > MAX_SHIFT_DIST:
                continue
            length = 0
            while length < MAX_SHIFT_SIZE and h + length < n and r + length < m \
                    and hyp[h + length] == ref[r + length]:
                length += 1
                if not any(hyp_err[h : h + length]) or not any(ref_err[r : r + length]):
                    continue
                if h <= ref_to_hyp[r] < h + length:
                    continue
                prev_dest = -1
                for off in range(-1, length):
                    dest = 0 if r + off == -1 else ref_to_hyp[r + off] + 1
                    if dest == prev_dest:
                        continue
                    prev_dest = dest
                    shifted = move_block(hyp, h, length, dest)
                    key = (dist - edit_distance(shifted, ref), length, -h, -dest)
                    checked += 1
                    if best is None or key > best[0]:
                        best = (key, shifted)
                if checked >= budget:
                    return best, checked
    return best, checked


def ter_edits(hyp: Text, ref: Text, shifts: bool = True) -> tuple[int, int]:
    """``(edits, ref_len)`` for one pair: greedy block shifts plus Levenshtein.

    Shifts are applied one at a time, always the one that lowers the edit
    distance most, until none lowers it. Each shift costs one edit. After
    MAX_SHIFT_CANDIDATES evaluated candidates in total the search stops.
    """
    hyp = list(as_tokens(hyp))
    ref = list(as_tokens(ref))
    if not shifts:
        return edit_distance(hyp, ref), len(ref)
    ref_spans = {}
    for j, w in enumerate(ref):
        ref_spans.setdefault(w, []).append(j)
    n_shifts = 0
    checked = 0
    while True:
        best, used = _best_shift(hyp, ref, ref_spans, MAX_SHIFT_CANDIDATES - checked)
        checked += used
        if checked >= MAX_SHIFT_CANDIDATES or best is None or best[0][0] <= 0:
            break
        hyp = best[1]
        n_shifts += 1
    return n_shifts + edit_distance(hyp, ref), len(ref)


def corpus_ter(
    hypotheses: Sequence[Text], references: Sequence[Text], shifts: bool = True
) -> float:
    """Total edits over total reference words, as a percentage (may exceed 100)."""
    edits = words = 0
    for hyp, ref in _pairs(hypotheses, references):
        e, w = ter_edits(hyp, ref, shifts)
        edits += e
        words += w
    return 100.0 * edits / words


def evaluate(hypotheses: Sequence[Text], references: Sequence[Text]) -> QualityScores:
    return QualityScores(
        bleu=corpus_bleu(hypotheses, references),
        ter=corpus_ter(hypotheses, references),
        chrf3=corpus_chrf3(hypotheses, references),
    )
