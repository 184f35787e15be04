"""Selection configurations over a multi-system backtranslation pool.

``from-all``
    Top-N over all (system, target) pairs; a target may be picked once per
    system.
``each-from-all``
    One source per target: greedy selection with per-target exclusivity,
    then a seeded uniform random system for targets none of whose
    candidates overlap the seed.
``each-from-all-x4``
    The each-from-all selection repeated four times.
``each-from-all-rs``
    each-from-all with scores multiplied by a per-system factor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .corpus import MultiSourcePool
from .errors import ConfigError, FactorError
from .fda import SelectionRecord, SelectionResult, build_result, greedy_indices
from .ngrams import SeedNGramSet

log = logging.getLogger(__name__)

STRATEGIES = ("from-all", "each-from-all", "each-from-all-x4", "each-from-all-rs")


@dataclass(frozen=True)
class StrategyConfig:
    kind: str
    budget: int | None = None
    rng_seed: int = 0
    factors: Mapping[str, float] | None = None

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.kind!r}; choose from {', '.join(STRATEGIES)}")
        if self.kind == "from-all":
            if self.budget is None:
                raise ConfigError("from-all requires an explicit --budget")
            if self.budget < 0:
                raise ConfigError("budget must be >= 0")
        elif self.budget is not None:
            raise ConfigError(f"{self.kind} selects one source per target; --budget does not apply")
        if self.kind == "each-from-all-rs" and self.factors is None:
            raise ConfigError("each-from-all-rs requires --factors")
        if self.kind != "each-from-all-rs" and self.factors is not None:
            raise ConfigError("--factors only applies to each-from-all-rs")


def _select_pool(
    pool: MultiSourcePool,
    seed: SeedNGramSet,
    factors: Mapping[str, float] | None,
    budget: int | None,
    exclusive: bool,
    decay: bool = True,
    distinct: bool = False,
):
    names = sorted(pool.sources)
    k = len(names)
    n = len(pool)
    cols = [pool.sources[name] for name in names]
    sources = [cols[j][i].tokens for i in range(n) for j in range(k)]
    target_idx = np.repeat(np.arange(n, dtype=np.int64), k)
    system_idx = np.tile(np.arange(k, dtype=np.int64), n)
    fac = [1.0 if factors is None else float(factors[name]) for name in names]
    # Target-major enumeration with systems sorted by name is already tie order.
    picked = greedy_indices(
        sources,
        target_idx.tolist(),
        system_idx.tolist(),
        np.arange(n * k),
        seed,
        fac,
        budget=budget,
        exclusive=exclusive,
        decay=decay,
        distinct=distinct,
    )
    return [(pool.candidate(names[c % k], c // k), s) for c, s in picked]


def run_from_all(
    pool: MultiSourcePool,
    seed: SeedNGramSet,
    budget: int,
    decay: bool = True,
    distinct: bool = False,
) -> SelectionResult:
    """Top ``budget`` pairs from the concatenated pool.

    Candidates without seed overlap are never taken, so the budget may stay
    partly unfilled; the gap is reported as ``shortfall``.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    picked = _select_pool(pool, seed, None, budget, False, decay, distinct)
    result = build_result(picked, pool.systems, budget)
    if result.shortfall:
        log.warning("from-all: only %d of %d budget filled", len(result), budget)
    return result


def _check_factors(pool: MultiSourcePool, factors: Mapping[str, float]) -> dict[str, float]:
    out = {}
    for name in pool.systems:
        if name not in factors:
            raise FactorError(f"no factor for system {name!r}", system=name)
        f = float(factors[name])
        if not (f > 0 and np.isfinite(f)):
            raise FactorError(f"factor for system {name!r} must be finite and positive, got {f}", system=name)
        out[name] = f
    return out


def run_each_from_all(
    pool: MultiSourcePool,
    seed: SeedNGramSet,
    factors: Mapping[str, float] | None = None,
    rng_seed: int = 0,
    distinct: bool = False,
) -> SelectionResult:
    """Exactly one record per target.

    Targets still unassigned once no candidate has a positive score get a
    system drawn uniformly (PCG64 seeded with ``rng_seed``), visited in
    target order. Those records carry score 0.0 and follow the scored ones.
    """
    if factors is not None:
        factors = _check_factors(pool, factors)
    picked = _select_pool(pool, seed, factors, None, True, True, distinct)
    taken = np.zeros(len(pool), dtype=bool)
    for pair, _ in picked:
        taken[pair.target_idx] = True
    missing = np.flatnonzero(~taken)
    names = sorted(pool.sources)
    if len(missing):
        rng = np.random.Generator(np.random.PCG64(rng_seed))
        draws = rng.integers(0, len(names), size=len(missing))
        picked.extend(
            (pool.candidate(names[d], int(t)), 0.0) for t, d in zip(missing.tolist(), draws.tolist())
        )
        log.info("each-from-all: %d targets assigned by random fallback", len(missing))
    result = build_result(picked, pool.systems)
    result.n_fallback = len(missing)
    return result


def repeat_result(result: SelectionResult, times: int) -> SelectionResult:
    n = len(result.records)
    records = [
        replace(r, rank=k * n + r.rank) for k in range(times) for r in result.records
    ]
    return SelectionResult(
        records,
        {name: c * times for name, c in result.per_system_counts.items()},
        shortfall=result.shortfall * times,
        n_fallback=result.n_fallback * times,
    )


def run_each_from_all_x4(
    pool: MultiSourcePool,
    seed: SeedNGramSet,
    rng_seed: int = 0,
    distinct: bool = False,
) -> SelectionResult:
    return repeat_result(run_each_from_all(pool, seed, None, rng_seed, distinct), 4)


def run_rescored(
    pool: MultiSourcePool,
    seed: SeedNGramSet,
    factor_table,
    rng_seed: int = 0,
    distinct: bool = False,
) -> SelectionResult:
    """each-from-all with every score multiplied by its system's phi.

    ``factor_table`` is a :class:`~btselect.rescoring.SystemFactorTable` or a
    plain mapping of system name to factor.
    """
    factors = factor_table.phis() if hasattr(factor_table, "phis") else dict(factor_table)
    return run_each_from_all(pool, seed, _check_factors(pool, factors), rng_seed, distinct)


def run_strategy(
    pool: MultiSourcePool,
    seed: SeedNGramSet,
    config: StrategyConfig,
    distinct: bool = False,
) -> SelectionResult:
    if config.kind == "from-all":
        return run_from_all(pool, seed, config.budget, distinct=distinct)
    if config.kind == "each-from-all":
        return run_each_from_all(pool, seed, None, config.rng_seed, distinct)
    if config.kind == "each-from-all-x4":
        return run_each_from_all_x4(pool, seed, config.rng_seed, distinct)
    return run_rescored(pool, seed, config.factors, config.rng_seed, distinct)


__all__ = [
    "STRATEGIES",
    "SelectionRecord",
    "StrategyConfig",
    "repeat_result",
    "run_each_from_all",
    "run_each_from_all_x4",
    "run_from_all",
    "run_rescored",
    "run_strategy",
]
