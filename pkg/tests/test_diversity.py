import math
import random

import pytest

from btselect.diversity import DiversityScores, mtld, ttr, yules_i

from oracles import mtld_oracle, mtld_scanner, yules_i_oracle


def doc(*sents):
    return [s.split() for s in sents]


def test_ttr_hand_cases():
    assert ttr(doc("a b c")) == 1.0
    assert ttr(doc("a a a a")) == 0.25
    assert ttr(doc("a a b")) == 2 / 3


def test_yules_i_hand_cases():
    assert yules_i(doc("a a b")) == 4.5
    assert yules_i(doc("a a")) == 2.0
    assert yules_i(doc("a b c")) == math.inf


def test_yules_i_matches_frequency_class_oracle():
    rng = random.Random(0)
    for _ in range(200):
        toks = [rng.choice("abcdefg") for _ in range(rng.randint(1, 40))]
        expected = yules_i_oracle(toks)
        got = yules_i([toks])
        if expected == math.inf:
            assert got == math.inf
        else:
            assert got == pytest.approx(float(expected), rel=1e-12)


def test_empty_document_rejected():
    for fn in (ttr, yules_i, mtld):
        with pytest.raises(ValueError):
            fn([[], []])


def test_mtld_undefined_cases():
    assert mtld(doc("a")) is None
    assert mtld(doc("a b c d e")) is None


def test_mtld_alternating_stream():
    toks = ["a", "b"] * 10
    assert mtld([toks]) == pytest.approx(mtld_oracle(toks), abs=1e-12)
    # reversal symmetry of this stream
    assert mtld([toks], direction="forward") == mtld([toks[::-1]], direction="forward")


def test_mtld_matches_scanner():
    rng = random.Random(1)
    for _ in range(60):
        v = rng.randint(1, 60)
        toks = [f"w{rng.randrange(v)}" for _ in range(rng.randint(1, 800))]
        expected = mtld_oracle(toks)
        got = mtld([toks])
        if expected is None:
            assert got is None
        else:
            assert got == pytest.approx(expected, abs=1e-9)


def test_mtld_direction_property():
    rng = random.Random(2)
    toks = [f"w{rng.randrange(20)}" for _ in range(300)]
    assert mtld([toks], direction="forward") == mtld([toks[::-1]], direction="reverse")
    assert mtld([toks], direction="forward") == pytest.approx(len(toks) / mtld_scanner(toks))


def test_mtld_threshold_validation():
    with pytest.raises(ValueError):
        mtld(doc("a b"), threshold=1.0)
    with pytest.raises(ValueError):
        mtld(doc("a b"), direction="sideways")


def test_ttr_permutation_invariant_mtld_order_sensitive():
    d = doc("a b c d", "a a a a", "e f g h")
    perm = [d[1], d[0], d[2]]
    assert ttr(d) == ttr(perm)
    assert mtld(d) != mtld(perm)


def test_concatenated_copies():
    base = doc("a b c a d e b f")
    prev = ttr(base)
    for k in range(2, 6):
        cat = base * k
        t = ttr(cat)
        assert t < prev
        prev = t
        flat = [w for s in cat for w in s]
        assert mtld(cat) == pytest.approx(mtld_oracle(flat), abs=1e-9)


def test_scores_json():
    out = DiversityScores.of(doc("a b c")).to_json()
    assert out["ttr"] == 1.0
    assert out["yules_i"] is None and out["mtld"] is None
    assert set(out["reasons"]) == {"yules_i", "mtld"}
    out = DiversityScores.of(doc("a a b")).to_json()
    assert out["ttr"] == 0.6667 and out["yules_i"] == 4.5
    assert "reasons" not in out
