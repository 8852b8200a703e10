"""Hierarchical deterministic random streams.

Every stochastic component (per-coin agents, per-coin harness bots, fault
injection, bootstrap replicates) draws from its own child stream derived
from the master seed and a label path. Adding or removing one component
never perturbs the draws of any other, which is what makes common-random-
number comparisons and per-coin parallel sharding exact.
"""

from __future__ import annotations

import hashlib
import random

_MASK64 = (1 << 64) - 1


def child_seed(master_seed: int, *path: object) -> int:
    """Derive a 64-bit child seed from a master seed and a label path.

    The path is rendered to text, so labels may be strings or ints; the
    derivation is stable across processes and platforms.
    """
    label = "/".join(str(p) for p in path)
    digest = hashlib.sha256(f"{master_seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _MASK64


def child_rng(master_seed: int, *path: object) -> random.Random:
    """A `random.Random` seeded from `child_seed(master_seed, *path)`."""
    return random.Random(child_seed(master_seed, *path))
