"""Seeded random streams.

Every randomized operation in this package is a pure function of its inputs
and an :class:`RngStream`. A stream is identified by a base seed plus a key
tuple (typically (graph id, user id), optionally extended with a trial
index), and two streams with different keys are statistically independent.
Bit-level reproducibility is guaranteed within this implementation only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """Identity of one deterministic random stream.

    The same (seed, key) always reproduces the same draws. Hot loops may
    instead pass a live ``np.random.Generator`` to any operation that accepts
    a stream; determinism is then the caller's responsibility.
    """

    seed: int
    key: tuple[int, ...] = ()

    def child(self, *ids: int) -> "RngStream":
        """Derive an independent sub-stream, e.g. ``stream.child(graph, user)``."""
        return RngStream(self.seed, self.key + ids)

    def generator(self) -> np.random.Generator:
        """Fresh generator whose state is a pure function of (seed, key)."""
        return np.random.default_rng(np.random.SeedSequence((self.seed, *self.key)))


def as_generator(rng: "RngStream | np.random.Generator") -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng
