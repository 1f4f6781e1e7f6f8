"""Shapley attribution of a system-level risk functional.

A coalition game assigns a risk value Phi to every subset of players
(banks, countries).  The Shapley value of player i averages the
marginal contribution Phi(s) - Phi(s \\ {i}) over coalitions, weighted
so that every ordering of arrivals counts equally:

    SV_i = sum over s containing i of
           (|s|-1)! (n-|s|)! / n!  *  [Phi(s) - Phi(s \\ {i})]

The empty coalition carries no risk: Phi(empty) = 0 by definition and
is never evaluated.  Exact enumeration walks all 2^n subsets and is
capped by max_players; beyond that the permutation-sampling estimator
applies.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np


class CoalitionGame:
    """n players with a cached characteristic function.

    phi receives a frozenset of player indices in [0, n) and must be a
    pure function; values are cached by subset bitmask and each subset
    is evaluated at most once across exact and sampled runs.
    """

    def __init__(self, n: int, phi: Callable[[frozenset[int]], float]):
        if n < 1:
            raise ValueError("a game needs at least one player")
        self.n = n
        self._phi = phi
        self._cache: dict[int, float] = {0: 0.0}

    def value(self, mask: int) -> float:
        """Phi of the subset encoded by mask."""
        cached = self._cache.get(mask)
        if cached is None:
            players = frozenset(i for i in range(self.n) if mask >> i & 1)
            cached = float(self._phi(players))
            self._cache[mask] = cached
        return cached

    @property
    def grand_mask(self) -> int:
        return (1 << self.n) - 1

    def grand_value(self) -> float:
        return self.value(self.grand_mask)


def shapley_exact(game: CoalitionGame, *, max_players: int = 20) -> np.ndarray:
    """Exact Shapley values by subset enumeration.

    Raises if the game exceeds max_players (2^n evaluations); use
    shapley_sampled for larger games.  The returned values satisfy
    efficiency: their sum telescopes to Phi of the grand coalition.
    """
    n = game.n
    if n > max_players:
        raise ValueError(
            f"{n} players need 2^{n} coalition evaluations, above the "
            f"max_players={max_players} cap; use shapley_sampled instead")

    fact = math.factorial
    weight = [0.0] * (n + 1)
    for size in range(1, n + 1):
        weight[size] = fact(size - 1) * fact(n - size) / fact(n)

    values = np.zeros(n)
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        w = weight[size]
        with_all = game.value(mask)
        remaining = mask
        while remaining:
            bit = remaining & -remaining
            i = bit.bit_length() - 1
            values[i] += w * (with_all - game.value(mask ^ bit))
            remaining ^= bit
    return values


@dataclass(frozen=True)
class SampledShapley:
    """Permutation-sampling estimates with per-player standard errors."""

    values: np.ndarray
    std_errors: np.ndarray
    samples: int


def shapley_sampled(game: CoalitionGame, samples: int,
                    seed: int = 0) -> SampledShapley:
    """Monte Carlo Shapley estimate over uniform player permutations.

    Each sampled permutation contributes one marginal per player; the
    estimate is their mean.  std_errors use the sample standard
    deviation over permutations (NaN for a single sample).  Every
    permutation's marginals telescope, so the estimate sum always
    equals Phi of the grand coalition.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = game.n
    rng = np.random.default_rng(seed)
    sums = np.zeros(n)
    sums_sq = np.zeros(n)

    for _ in range(samples):
        order = rng.permutation(n)
        mask = 0
        prev = 0.0
        for player in order:
            mask |= 1 << int(player)
            cur = game.value(mask)
            marginal = cur - prev
            sums[player] += marginal
            sums_sq[player] += marginal * marginal
            prev = cur

    values = sums / samples
    if samples > 1:
        variance = np.maximum(sums_sq - samples * values**2, 0.0) / (samples - 1)
        std_errors = np.sqrt(variance / samples)
    else:
        std_errors = np.full(n, np.nan)
    return SampledShapley(values, std_errors, samples)
