"""Deterministic seed derivation for parallel work.

All randomness flows from one top-level seed; sub-streams are keyed by a
(purpose, index) pair so results do not depend on execution order or
thread scheduling.
"""

from __future__ import annotations

import hashlib

import numpy as np


def subseed(seed: int, purpose: str, index: int = 0) -> np.random.SeedSequence:
    """SeedSequence derived by stable hashing of (seed, purpose, index)."""
    digest = hashlib.sha256(purpose.encode("utf-8")).digest()
    purpose_key = int.from_bytes(digest[:8], "little")
    return np.random.SeedSequence(entropy=int(seed), spawn_key=(purpose_key, int(index)))


def generator(seed: int, purpose: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(subseed(seed, purpose, index))


def derived_int(seed: int, purpose: str, index: int = 0) -> int:
    """A plain integer seed for APIs that take one."""
    return int(subseed(seed, purpose, index).generate_state(1)[0])
