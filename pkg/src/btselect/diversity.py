"""Document-level lexical diversity: TTR, Yule's I and MTLD.

A document is a list of sentences, measured on the flattened token stream.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Sentence, as_tokens

MTLD_THRESHOLD = 0.72


def flatten(doc: Iterable[Sentence | Sequence[str]]) -> list[str]:
    tokens = [t for s in doc for t in as_tokens(s)]
    if not tokens:
        raise ValueError("document has no tokens")
    return tokens


def ttr(doc) -> float:
    tokens = flatten(doc)
    return len(set(tokens)) / len(tokens)


def yules_i(doc) -> float:
    """Yule's I = M1**2 / (M2 - M1); ``math.inf`` when every type occurs once."""
    freqs = Counter(flatten(doc))
    m1 = sum(freqs.values())
    spectrum = Counter(freqs.values())
    m2 = sum(f * f * v for f, v in spectrum.items())
    if m2 == m1:
        return math.inf
    return m1 * m1 / (m2 - m1)


def mtld_factors(tokens: Sequence[str], threshold: float = MTLD_THRESHOLD) -> float:
    """Factor count of one MTLD pass over ``tokens``.

    A factor completes whenever the running TTR falls below ``threshold``;
    the leftover segment adds its partial distance toward the threshold.
    """
    factors = 0.0
    types = set()
    count = 0
    for tok in tokens:
        count += 1
        types.add(tok)
        if len(types) / count < threshold:
            factors += 1.0
            types = set()
            count = 0
    if count:
        factors += (1.0 - len(types) / count) / (1.0 - threshold)
    return factors


def mtld(doc, threshold: float = MTLD_THRESHOLD, direction: str = "both") -> float | None:
    """Measure of textual lexical diversity.

    ``direction`` is ``"forward"``, ``"reverse"`` or ``"both"`` (the mean of
    the two passes). Returns ``None`` when a pass ends with zero factors, in
    which case the measure is undefined.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie strictly between 0 and 1")
    tokens = flatten(doc)
    passes = {"forward": [tokens], "reverse": [tokens[::-1]], "both": [tokens, tokens[::-1]]}
    if direction not in passes:
        raise ValueError(f"unknown direction {direction!r}")
    values = []
    for stream in passes[direction]:
        f = mtld_factors(stream, threshold)
        if f == 0.0:
            return None
        values.append(len(stream) / f)
    return sum(values) / len(values)


@dataclass(frozen=True)
class DiversityScores:
    ttr: float
    yules_i: float
    mtld: float | None

    @classmethod
    def of(cls, doc, threshold: float = MTLD_THRESHOLD) -> DiversityScores:
        doc = list(doc)
        return cls(ttr(doc), yules_i(doc), mtld(doc, threshold))

    def to_json(self, digits: int = 4) -> dict:
        out = {"ttr": round(self.ttr, digits)}
        reasons = {}
        if math.isinf(self.yules_i):
            out["yules_i"] = None
            reasons["yules_i"] = "every type occurs exactly once (M2 == M1)"
        else:
            out["yules_i"] = round(self.yules_i, digits)
        if self.mtld is None:
            out["mtld"] = None
            reasons["mtld"] = "zero MTLD factors (TTR never fell below the threshold)"
        else:
            out["mtld"] = round(self.mtld, digits)
        if reasons:
            out["reasons"] = reasons
        return out
