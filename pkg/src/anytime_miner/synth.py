"""Seeded synthetic transaction databases for tests and benchmarks."""

from __future__ import annotations

import random

import numpy as np


def random_transactions(seed: int, n_items: int, n_transactions: int, density: float) -> list[set[int]]:
    rng = random.Random(seed)
    return [{i for i in range(n_items) if rng.random() < density} for _ in range(n_transactions)]


def random_corpus(count: int = 200, seed: int = 0, max_items: int = 10, max_transactions: int = 15):
    """Small random databases: (seed, transactions) with densities in [0.2, 0.8]."""
    rng = random.Random(seed)
    for _ in range(count):
        sub = rng.randrange(2**32)
        n_items = rng.randint(1, max_items)
        n_trans = rng.randint(1, max_transactions)
        density = rng.uniform(0.2, 0.8)
        yield sub, random_transactions(sub, n_items, n_trans, density)


def correlated_top(k: int, m: int = 4, extra: int = 3, seed: int = 0) -> list[set[int]]:
    """k items present in every transaction plus a few strictly rarer items."""
    rng = random.Random(seed)
    out = []
    for t in range(m):
        row = set(range(k))
        for e in range(extra):
            # item k+e never reaches full support
            if t != e % m and rng.random() < 0.6:
                row.add(k + e)
        out.append(row)
    return out


def quest_like(
    seed: int,
    n_transactions: int = 5000,
    n_items: int = 200,
    avg_length: float = 8.0,
    n_patterns: int = 60,
    avg_pattern_length: float = 4.0,
    corruption: float = 0.3,
) -> list[set[int]]:
    """Simplified IBM Quest generator: transactions assembled from weighted latent patterns.

    Item popularity is skewed, patterns overlap, and each inserted pattern
    loses items at random, so supports spread over many levels.
    """
    rng = np.random.default_rng(seed)
    popularity = rng.pareto(1.5, n_items) + 1.0
    popularity /= popularity.sum()
    patterns = []
    for _ in range(n_patterns):
        size = max(1, int(rng.poisson(avg_pattern_length)))
        size = min(size, n_items)
        patterns.append(rng.choice(n_items, size=size, replace=False, p=popularity))
    weights = rng.exponential(1.0, n_patterns)
    weights /= weights.sum()
    out = []
    for _ in range(n_transactions):
        target = max(1, int(rng.poisson(avg_length)))
        row: set[int] = set()
        while len(row) < target:
            pat = patterns[rng.choice(n_patterns, p=weights)]
            keep = rng.random(len(pat)) >= corruption
            row.update(int(i) for i in pat[keep])
            if rng.random() < 0.3:
                row.add(int(rng.choice(n_items, p=popularity)))
        out.append(row)
    return out
