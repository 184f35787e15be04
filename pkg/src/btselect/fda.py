"""Greedy Feature Decay selection with lazy priority-queue re-evaluation.

A candidate's score is the sum, over occurrences of its seed n-grams, of
``0.5 ** C`` where ``C`` counts that n-gram in the already selected sources,
divided by the candidate's length. The sum runs left to right in n-gram
enumeration order (shorter n-grams first, then by position) so every code
path produces the same double. An optional per-system factor multiplies the
score.

Scores only fall as counts grow, so a stale heap entry is an upper bound on
its true score. Popping the top entry, re-scoring it if stale and pushing it
back yields the exact argmax without re-scoring the whole pool each step.
"""

from __future__ import annotations

import logging
import math
from array import array
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .corpus import CandidatePair, Sentence, as_tokens
from .errors import DataError
from . import _kernel
from .ngrams import HALF_TABLE, SeedNGramSet, SelectedCounts

log = logging.getLogger(__name__)

_HALF_ARRAY = np.array(HALF_TABLE, dtype=np.float64)

TSV_HEADER = ("rank", "effective_score", "system", "target_line_no", "source_text", "target_text")


def fda_score(
    s: Sentence | Sequence[str],
    seed: SeedNGramSet,
    counts: SelectedCounts | None = None,
    distinct: bool = False,
) -> float:
    """Decayed seed overlap of ``s`` per token; 0.0 for empty or non-overlapping input."""
    tokens = as_tokens(s)
    if not tokens:
        return 0.0
    ids = seed.shared_ids(tokens, distinct)
    if not ids:
        return 0.0
    if counts is None:
        return len(ids) / len(tokens)
    w = counts.weights
    total = 0.0
    for i in ids:
        total += w[i]
    return total / len(tokens)


@dataclass(frozen=True, slots=True)
class SelectionRecord:
    rank: int
    pair: CandidatePair
    score: float


@dataclass
class SelectionResult:
    """Selected pairs in selection order.

    ``shortfall`` is the unfilled part of a numeric budget; ``n_fallback``
    counts records assigned by random fallback rather than by score.
    """

    records: list[SelectionRecord] = field(default_factory=list)
    per_system_counts: dict[str, int] = field(default_factory=dict)
    shortfall: int = 0
    n_fallback: int = 0

    def __len__(self) -> int:
        return len(self.records)

    def pairs(self) -> list[tuple[str, int]]:
        return [(r.pair.system, r.pair.target_idx) for r in self.records]

    def scores(self) -> list[float]:
        return [r.score for r in self.records]

    def to_tsv(self) -> str:
        lines = ["\t".join(TSV_HEADER)]
        for r in self.records:
            p = r.pair
            lines.append(
                f"{r.rank}\t{r.score:.9f}\t{p.system}\t{p.target.line_no}\t"
                f"{p.source.text}\t{p.target.text}"
            )
        return "\n".join(lines) + "\n"

    def write_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_tsv())

    @classmethod
    def read_tsv(cls, path, systems: Sequence[str] | None = None) -> SelectionResult:
        """Rebuild a result from a selection TSV (scores at TSV precision)."""
        records = []
        counts = Counter()
        with open(path, encoding="utf-8", newline="\n") as f:
            header = f.readline().rstrip("\n").split("\t")
            if tuple(header) != TSV_HEADER:
                raise DataError(f"{path}: unexpected header {header}")
            for n, line in enumerate(f, start=2):
                cols = line.rstrip("\n").split("\t")
                if len(cols) != len(TSV_HEADER):
                    raise DataError(f"{path}:{n}: expected {len(TSV_HEADER)} columns")
                rank, score, system, line_no, src, tgt = cols
                line_no = int(line_no)
                pair = CandidatePair(
                    system,
                    line_no,
                    Sentence(as_tokens(src), line_no),
                    Sentence(as_tokens(tgt), line_no),
                )
                records.append(SelectionRecord(int(rank), pair, float(score)))
                counts[system] += 1
        names = sorted(set(systems or ()) | set(counts))
        return cls(records, {name: counts[name] for name in names})


def greedy_indices(
    sources: Sequence[Sequence[str]],
    target_idx: Sequence[int],
    system_idx: Sequence[int],
    tie_order: Sequence[int],
    seed: SeedNGramSet,
    factors: Sequence[float],
    budget: int | None = None,
    exclusive: bool = False,
    decay: bool = True,
    distinct: bool = False,
) -> list[tuple[int, float]]:
    """Core selection loop over parallel candidate arrays.

    Args:
        sources: Source tokens per candidate.
        target_idx: Target index per candidate.
        system_idx: Index into ``factors`` per candidate.
        tie_order: Candidate indices sorted by the tie-breaking rule; equal
            scores go to the candidate appearing first.
        factors: Positive multiplier per system index.
        budget: Maximum number of selections, ``None`` for no limit.
        exclusive: At most one selection per target index.
        decay: If false, counts stay at zero and the ranking is static.

    Returns:
        ``(candidate_index, effective_score)`` in selection order.
    """
    n = len(sources)
    if budget is not None and budget <= 0 or n == 0:
        return []

    # Seed-n-gram ids per distinct source sentence (CSR layout).
    flat = array("i")
    offs = array("q", [0])
    lengths = array("i")
    upd = array("i") if distinct else flat
    upd_offs = array("q", [0]) if distinct else offs
    cand_tok = array("q", [0]) * n
    tok_ids: dict = {}
    shared_ids = seed.shared_ids
    for c, toks in enumerate(sources):
        toks = tuple(toks)
        t = tok_ids.get(toks)
        if t is None:
            t = tok_ids[toks] = len(lengths)
            flat.extend(shared_ids(toks, distinct))
            offs.append(len(flat))
            lengths.append(len(toks))
            if distinct:
                # Counts track every occurrence even when scoring is distinct.
                upd.extend(shared_ids(toks))
                upd_offs.append(len(upd))
        cand_tok[c] = t
    del tok_ids
    flat = np.frombuffer(flat, dtype=np.int32)
    offs = np.frombuffer(offs, dtype=np.int64)
    lengths = np.frombuffer(lengths, dtype=np.int32)
    if distinct:
        upd = np.frombuffer(upd, dtype=np.int32)
        upd_offs = np.frombuffer(upd_offs, dtype=np.int64)
    else:
        upd, upd_offs = flat, offs
    cand_tok = np.frombuffer(cand_tok, dtype=np.int64)

    # Group candidates that can never score differently: same sentence, same factor.
    factor_values, factor_idx = np.unique(np.asarray(factors, dtype=np.float64), return_inverse=True)
    cand_fidx = factor_idx.reshape(-1)[np.asarray(system_idx, dtype=np.int64)]
    group_ids, cand_group = np.unique(cand_tok * len(factor_values) + cand_fidx, return_inverse=True)
    cand_group = cand_group.reshape(-1)
    group_tok = group_ids // len(factor_values)
    group_factor = factor_values[group_ids % len(factor_values)]
    with np.errstate(divide="ignore", invalid="ignore"):
        tok_initial = np.where(lengths > 0, np.diff(offs) / lengths, 0.0)
    group_initial = tok_initial[group_tok] * group_factor

    order = np.asarray(tie_order, dtype=np.int64)
    key_group = cand_group[order]
    keys = np.nonzero(group_initial[key_group] > 0)[0]
    members = keys[np.argsort(key_group[keys], kind="stable")]
    member_offs = np.zeros(len(group_ids) + 1, dtype=np.int64)
    np.cumsum(np.bincount(key_group[keys], minlength=len(group_ids)), out=member_offs[1:])
    firsts = member_offs[:-1][np.diff(member_offs) > 0]
    heap_key = members[firsts]
    heap_score = group_initial[key_group[heap_key]]
    del keys, cand_group, cand_tok, firsts
    _kernel.heapify(heap_score, heap_key)
    cand_target = np.asarray(target_idx, dtype=np.int64)
    picked, scores = _kernel.greedy_kernel(
        flat, offs, upd, upd_offs, lengths, group_tok, group_factor,
        members, member_offs, key_group, order, cand_target,
        heap_score, heap_key, len(seed), _HALF_ARRAY,
        n if budget is None else budget, exclusive, decay,
        int(cand_target.max()) + 1 if n else 0,
    )
    return list(zip(picked.tolist(), scores.tolist()))


def tie_break_order(
    target_idx: Sequence[int], system_names: Sequence[str]
) -> np.ndarray:
    """Candidate indices by (target index, system name, original position)."""
    n = len(target_idx)
    name_rank = {name: r for r, name in enumerate(sorted(set(system_names)))}
    sys_rank = np.fromiter((name_rank[s] for s in system_names), dtype=np.int64, count=n)
    return np.lexsort((np.arange(n), sys_rank, np.asarray(target_idx, dtype=np.int64)))


def select_greedy(
    candidates: Sequence[CandidatePair],
    seed: SeedNGramSet,
    factors: Mapping[str, float] | None = None,
    budget: int | None = None,
    exclusive: bool = False,
    decay: bool = True,
    distinct: bool = False,
) -> SelectionResult:
    """Select candidates one at a time by highest decayed, factored score.

    Args:
        candidates: Pairs to choose from; ``(system, target_idx)`` must be unique.
        seed: Seed n-grams driving the score.
        factors: Positive multiplier per system name; missing means 1.0.
        budget: Stop after this many selections (``None``: until exhausted).
        exclusive: Once a target is selected, drop its other candidates.
        decay: Disable to rank by the initial scores only.
        distinct: Count each shared n-gram once per candidate.

    Zero-score candidates are never selected, so fewer than ``budget``
    records may come back; the gap is stored as ``shortfall``.
    """
    candidates = list(candidates)
    factors = dict(factors or {})
    names = sorted({p.system for p in candidates})
    for name in names:
        f = factors.setdefault(name, 1.0)
        if not (f > 0 and math.isfinite(f)):
            raise DataError(f"factor for system {name!r} must be finite and positive, got {f}")
    if budget is not None and budget < 0:
        raise ValueError("budget must be >= 0")
    if len({(p.system, p.target_idx) for p in candidates}) != len(candidates):
        raise DataError("duplicate (system, target_idx) in candidate set")

    sys_index = {name: i for i, name in enumerate(names)}
    target_idx = [p.target_idx for p in candidates]
    picked = greedy_indices(
        [p.source.tokens for p in candidates],
        target_idx,
        [sys_index[p.system] for p in candidates],
        tie_break_order(target_idx, [p.system for p in candidates]),
        seed,
        [factors[name] for name in names],
        budget=budget,
        exclusive=exclusive,
        decay=decay,
        distinct=distinct,
    )
    return build_result([(candidates[c], s) for c, s in picked], names, budget)


def build_result(
    picked: Sequence[tuple[CandidatePair, float]],
    systems: Sequence[str],
    budget: int | None = None,
) -> SelectionResult:
    counts = Counter(p.system for p, _ in picked)
    records = [SelectionRecord(r, p, s) for r, (p, s) in enumerate(picked, start=1)]
    return SelectionResult(
        records,
        {name: counts[name] for name in sorted(set(systems) | set(counts))},
        shortfall=0 if budget is None else max(0, budget - len(records)),
    )
