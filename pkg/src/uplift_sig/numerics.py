"""Probability and random-number kernel.

The normal CDF is evaluated through ``math.erfc``, which is accurate to a
few ulp over the whole real line, so the tail ``1 - Phi(x)`` keeps full
relative precision instead of cancelling.

Random numbers come from numpy's PCG64 bit generator. Child streams are keyed
by a counter through :class:`numpy.random.SeedSequence`, which makes replicate
``i`` of a study independent of how many replicates run before it.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgument

_SQRT2 = math.sqrt(2.0)
_SEED_MASK = (1 << 64) - 1


def std_normal_cdf(x: float) -> float:
    if not math.isfinite(x):
        raise InvalidArgument(f"std_normal_cdf needs a finite argument, got {x!r}")
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_sf(x: float) -> float:
    """Upper tail ``1 - Phi(x)`` without cancellation."""
    if not math.isfinite(x):
        raise InvalidArgument(f"std_normal_sf needs a finite argument, got {x!r}")
    return 0.5 * math.erfc(x / _SQRT2)


def chi_sq1_sf(x: float) -> float:
    """Upper-tail probability of the chi-square distribution with one dof.

    ``P(X > x) = 2 * (1 - Phi(sqrt(x))) = erfc(sqrt(x / 2))``.
    """
    if math.isnan(x) or x < 0:
        raise InvalidArgument(f"chi_sq1_sf needs x >= 0, got {x!r}")
    if math.isinf(x):
        return 0.0
    return math.erfc(math.sqrt(x / 2.0))


class Rng:
    """Seedable PCG64 stream. Single-owner; do not share across threads."""

    def __init__(self, seed: int = 0, _key: tuple[int, ...] = ()):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise InvalidArgument(f"seed must be an integer, got {seed!r}")
        if not 0 <= seed <= _SEED_MASK:
            raise InvalidArgument(f"seed must fit in 64 unsigned bits, got {seed}")
        self.seed = int(seed)
        self.key = tuple(_key)
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.key)))

    def child(self, index: int) -> Rng:
        """Independent stream number ``index`` derived from this one's seed."""
        return Rng(self.seed, self.key + (int(index),))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def __repr__(self):
        return f"Rng(seed={self.seed}, key={self.key})"


def sample_binomial(rng: Rng, trials: int, p: float) -> int:
    """One exact draw from Binomial(trials, p).

    numpy uses inversion for small ``trials * p`` and the BTPE
    acceptance-rejection scheme otherwise; neither is a normal approximation.
    """
    if not (0.0 <= p <= 1.0):
        raise InvalidArgument(f"binomial probability must lie in [0, 1], got {p!r}")
    if trials < 0:
        raise InvalidArgument(f"binomial trials must be non-negative, got {trials}")
    if p == 0.0 or trials == 0:
        return 0
    if p == 1.0:
        return int(trials)
    return int(rng.generator.binomial(trials, p))
