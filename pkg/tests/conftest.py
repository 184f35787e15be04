import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from btselect.corpus import MultiSourcePool, Sentence  # noqa: E402


def make_pool(targets, **sources):
    """Pool from space-separated strings; one keyword argument per system."""
    tgt = tuple(Sentence(tuple(t.split()), i) for i, t in enumerate(targets))
    src = {
        name: tuple(Sentence(tuple(s.split()), i) for i, s in enumerate(lines))
        for name, lines in sources.items()
    }
    return MultiSourcePool(tgt, src)


def random_pool(rng, n_targets, n_systems, vocab=50, max_len=8, empty_rate=0.0):
    words = [f"w{i}" for i in range(vocab)]
    tgt = tuple(
        Sentence(tuple(rng.choice(words) for _ in range(rng.randint(1, max_len))), i)
        for i in range(n_targets)
    )
    src = {}
    for k in range(n_systems):
        lines = []
        for i in range(n_targets):
            n = 0 if rng.random() < empty_rate else rng.randint(1, max_len)
            lines.append(Sentence(tuple(rng.choice(words) for _ in range(n)), i))
        src[f"sys{k}"] = tuple(lines)
    return MultiSourcePool(tgt, src)


def random_seed(rng, n, vocab=50, max_len=8):
    words = [f"w{i}" for i in range(vocab)]
    return [[rng.choice(words) for _ in range(rng.randint(1, max_len))] for _ in range(n)]


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return _write
