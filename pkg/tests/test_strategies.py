import random
from collections import Counter

import pytest

from btselect.errors import ConfigError, FactorError
from btselect.fda import select_greedy
from btselect.ngrams import SeedNGramSet
from btselect.strategies import (
    StrategyConfig,
    repeat_result,
    run_each_from_all,
    run_each_from_all_x4,
    run_from_all,
    run_rescored,
    run_strategy,
)

from conftest import make_pool, random_pool, random_seed


SEED = SeedNGramSet.from_corpus([["a", "b", "c"]])


def test_from_all_duplicate_target_allowed():
    pool = make_pool(["t0", "t1"], A=["a b", "x"], B=["a c", "y"])
    res = run_from_all(pool, SEED, 2)
    assert sorted(res.pairs()) == [("A", 0), ("B", 0)]
    assert res.shortfall == 0


def test_from_all_budget_zero_and_conservation():
    rng = random.Random(3)
    pool = random_pool(rng, 100, 4, vocab=10)
    seed = SeedNGramSet.from_corpus(random_seed(rng, 20, vocab=10))
    assert len(run_from_all(pool, seed, 0)) == 0
    res = run_from_all(pool, seed, 50)
    assert sum(res.per_system_counts.values()) == 50
    assert len(set(res.pairs())) == 50
    per_target = Counter(t for _, t in res.pairs())
    assert max(per_target.values()) <= 4


def test_from_all_shortfall():
    pool = make_pool(["t0", "t1"], A=["a", "x"], B=["z", "y"])
    res = run_from_all(pool, SEED, 3)
    assert res.pairs() == [("A", 0)]
    assert res.shortfall == 2


def test_from_all_matches_select_greedy():
    rng = random.Random(5)
    pool = random_pool(rng, 40, 3, vocab=15)
    seed = SeedNGramSet.from_corpus(random_seed(rng, 10, vocab=15))
    a = run_from_all(pool, seed, 60)
    b = select_greedy(pool.candidates(), seed, budget=60)
    assert a.pairs() == b.pairs()
    assert a.scores() == b.scores()


def test_each_from_all_one_per_target_with_fallback():
    # target 1 overlaps nothing under any system
    pool = make_pool(["t0", "t1", "t2"], A=["a", "x", "b c"], B=["a b", "y", "q"])
    res = run_each_from_all(pool, SEED, rng_seed=11)
    assert sorted(t for _, t in res.pairs()) == [0, 1, 2]
    assert res.n_fallback == 1
    assert res.records[-1].pair.target_idx == 1
    assert res.records[-1].score == 0.0
    again = run_each_from_all(pool, SEED, rng_seed=11)
    assert again.to_tsv() == res.to_tsv()


def test_each_from_all_no_fallback_when_all_overlap():
    pool = make_pool(["t0", "t1"], A=["a", "b"], B=["c", "a b"])
    res = run_each_from_all(pool, SEED)
    assert res.n_fallback == 0
    assert len(res) == 2


def test_fallback_independence_from_rng_seed():
    rng = random.Random(8)
    pool = random_pool(rng, 80, 4, vocab=40, max_len=3)
    seed = SeedNGramSet.from_corpus(random_seed(rng, 3, vocab=40, max_len=3))
    a = run_each_from_all(pool, seed, rng_seed=1)
    b = run_each_from_all(pool, seed, rng_seed=2)
    assert a.n_fallback > 0
    scored = len(a) - a.n_fallback
    assert a.pairs()[:scored] == b.pairs()[:scored]
    assert sorted(t for _, t in a.pairs()) == list(range(80))


def test_fallback_is_roughly_uniform():
    pool = make_pool(["t"] * 4000, **{s: ["z"] * 4000 for s in "ABCD"})
    res = run_each_from_all(pool, SEED, rng_seed=0)
    assert res.n_fallback == 4000
    for c in res.per_system_counts.values():
        assert 850 < c < 1150


def test_x4_concatenation():
    rng = random.Random(1)
    pool = random_pool(rng, 10, 2, vocab=10)
    seed = SeedNGramSet.from_corpus(random_seed(rng, 5, vocab=10))
    base = run_each_from_all(pool, seed)
    x4 = run_each_from_all_x4(pool, seed)
    assert len(x4) == 40
    assert [r.rank for r in x4.records] == list(range(1, 41))
    for k in range(4):
        chunk = x4.records[k * 10 : (k + 1) * 10]
        assert [(r.pair, r.score) for r in chunk] == [(r.pair, r.score) for r in base.records]
    assert x4.per_system_counts == {s: 4 * c for s, c in base.per_system_counts.items()}


def test_x4_empty():
    pool = make_pool([], A=[], B=[])
    assert len(run_each_from_all_x4(pool, SEED)) == 0
    assert len(repeat_result(run_each_from_all(pool, SEED), 4)) == 0


def test_rescored_uniform_equals_plain():
    rng = random.Random(2)
    pool = random_pool(rng, 50, 4, vocab=12)
    seed = SeedNGramSet.from_corpus(random_seed(rng, 8, vocab=12))
    plain = run_each_from_all(pool, seed)
    rs = run_rescored(pool, seed, {s: 7.25 for s in pool.systems})
    assert rs.pairs() == plain.pairs()


def test_rescored_tie_pool():
    n = 20
    lines = ["a b"] * n
    pool = make_pool(["t"] * n, A=lines, B=lines, C=lines, D=lines)
    rs = run_rescored(pool, SEED, {"A": 1.2, "B": 1.0, "C": 1.0, "D": 1.0})
    assert rs.per_system_counts == {"A": n, "B": 0, "C": 0, "D": 0}
    # Without factors the tie goes to the first system name.
    assert run_each_from_all(pool, SEED).per_system_counts["A"] == n


def test_rescored_factor_errors():
    pool = make_pool(["t"], A=["a"], B=["b"])
    with pytest.raises(FactorError):
        run_rescored(pool, SEED, {"A": 1.0})
    with pytest.raises(FactorError):
        run_rescored(pool, SEED, {"A": 1.0, "B": 0.0})
    with pytest.raises(FactorError):
        run_rescored(pool, SEED, {"A": 1.0, "B": float("nan")})


def test_strategy_config_validation():
    with pytest.raises(ConfigError):
        StrategyConfig("from-all")
    with pytest.raises(ConfigError):
        StrategyConfig("each-from-all", budget=5)
    with pytest.raises(ConfigError):
        StrategyConfig("each-from-all-rs")
    with pytest.raises(ConfigError):
        StrategyConfig("each-from-all", factors={"A": 1.0})
    with pytest.raises(ConfigError):
        StrategyConfig("bogus")


def test_run_strategy_dispatch():
    pool = make_pool(["t0", "t1"], A=["a", "b"], B=["c", "a b"])
    assert len(run_strategy(pool, SEED, StrategyConfig("from-all", budget=3))) == 3
    assert len(run_strategy(pool, SEED, StrategyConfig("each-from-all"))) == 2
    assert len(run_strategy(pool, SEED, StrategyConfig("each-from-all-x4"))) == 8
    cfg = StrategyConfig("each-from-all-rs", factors={"A": 1.0, "B": 2.0})
    assert run_strategy(pool, SEED, cfg).per_system_counts == {"A": 0, "B": 2}
