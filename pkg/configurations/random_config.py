"""Seeded pseudo-random configurations, stable across runs and platforms."""

import hashlib
from typing import Sequence

from configurations.base import Configuration
from utils.exceptions import PreconditionError
from utils.lattice import Vector


class RandomConfig(Configuration):
    """Each coefficient is drawn from the alphabet by hashing (seed, v)."""

    def __init__(self, dimension: int, seed: int, alphabet: Sequence[int] = (0, 1)):
        values = tuple(sorted({int(a) for a in alphabet}))
        if not values:
            raise PreconditionError("alphabet must be nonempty")
        self.seed = int(seed)
        self.values = values
        super().__init__(dimension, alphabet=values)

    def _value(self, v: Vector) -> int:
        key = f"{self.seed}:{','.join(map(str, v))}".encode()
        digest = hashlib.blake2b(key, digest_size=8).digest()
        return self.values[int.from_bytes(digest, "big") % len(self.values)]
