"""N-gram extraction, the seed n-gram set and decaying selection counts."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator, Sequence

from .corpus import Sentence, as_tokens

DEFAULT_ORDER = 3

# 0.5**c for c < DECAY_CAP; at the cap the double underflows to 0.0.
DECAY_CAP = 1075
_HALF = [0.5**c for c in range(DECAY_CAP)] + [0.0]
HALF_TABLE = tuple(_HALF)


def decay_weight(count: int) -> float:
    return _HALF[count] if count < DECAY_CAP else 0.0


def iter_ngrams(tokens: Sequence[str], order: int) -> Iterator[tuple[str, ...]]:
    """Yield contiguous n-grams of lengths 1..order, shortest first, left to right."""
    if order < 1:
        raise ValueError("order must be >= 1")
    m = len(tokens)
    for k in range(1, min(order, m) + 1):
        for i in range(m - k + 1):
            yield tuple(tokens[i : i + k])


def extract_ngrams(s: Sentence | Sequence[str], order: int = DEFAULT_ORDER) -> Counter:
    """All n-grams of orders 1..order with their multiplicity."""
    return Counter(iter_ngrams(as_tokens(s), order))


class SeedNGramSet:
    """The n-grams (orders 1..order) occurring in the seed corpus.

    Every seed n-gram gets a dense integer id; ids are assigned in order of
    first occurrence so construction is deterministic.
    """

    def __init__(self, grams: Iterable[tuple[str, ...]], order: int = DEFAULT_ORDER):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        self.ids: dict[tuple[str, ...], int] = {}
        for g in grams:
            g = tuple(g)
            if not 1 <= len(g) <= order:
                raise ValueError(f"n-gram {g!r} outside orders 1..{order}")
            self.ids.setdefault(g, len(self.ids))
        self.grams = tuple(self.ids)

    @classmethod
    def from_corpus(
        cls, corpus: Iterable[Sentence | Sequence[str]], order: int = DEFAULT_ORDER
    ) -> SeedNGramSet:
        corpus = list(corpus)
        if not corpus:
            raise ValueError("seed corpus is empty")
        return cls(
            (g for s in corpus for g in iter_ngrams(as_tokens(s), order)), order
        )

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, gram) -> bool:
        return tuple(gram) in self.ids

    def shared_ids(self, s: Sentence | Sequence[str], distinct: bool = False) -> list[int]:
        """Ids of the sentence's n-grams found in the seed, one per occurrence.

        The order follows :func:`iter_ngrams`. With ``distinct`` each seed
        n-gram is reported once however often the sentence repeats it.
        """
        tokens = as_tokens(s)
        get = self.ids.get
        out = []
        m = len(tokens)
        for k in range(1, min(self.order, m) + 1):
            for i in range(m - k + 1):
                gid = get(tokens[i : i + k])
                if gid is not None:
                    out.append(gid)
        if distinct:
            out = list(dict.fromkeys(out))
        return out

    def shared_ngrams(self, s: Sentence | Sequence[str], distinct: bool = False) -> Counter:
        grams = self.grams
        return Counter(grams[i] for i in self.shared_ids(s, distinct))


class SelectedCounts:
    """Occurrence counts of seed n-grams over the selected set.

    Only seed n-grams are tracked. ``version`` increases with every
    :meth:`add_selected` call and serves as a staleness stamp for cached
    scores.
    """

    def __init__(self, seed: SeedNGramSet):
        self.seed = seed
        self.counts = [0] * len(seed)
        self.weights = [1.0] * len(seed)
        self.version = 0

    def __getitem__(self, gram) -> int:
        gid = self.seed.ids.get(tuple(gram))
        return 0 if gid is None else self.counts[gid]

    def as_dict(self) -> dict[tuple[str, ...], int]:
        grams = self.seed.grams
        return {grams[i]: c for i, c in enumerate(self.counts) if c}

    def add_ids(self, ids: Iterable[int]) -> None:
        counts, weights = self.counts, self.weights
        for gid in ids:
            c = counts[gid] + 1
            counts[gid] = c
            weights[gid] = _HALF[c] if c < DECAY_CAP else 0.0
        self.version += 1

    def add_selected(self, s: Sentence | Sequence[str]) -> SelectedCounts:
        self.add_ids(self.seed.shared_ids(s))
        return self
