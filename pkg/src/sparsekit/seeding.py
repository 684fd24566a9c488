"""Deterministic per-job random seeding.

Every randomized operation in this package takes a RunSeed instead of a bare
integer. A RunSeed couples a 64-bit master seed with a structured job key
(for example ``(graph_label, sparsifier, rate, repetition)``), and the derived
generator is a pure function of the two. Sweeps that fan out over threads
therefore produce the same stream per job no matter how jobs are scheduled or
how many workers run them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


def _canon(part):
    """Normalize a job-key part so its repr is stable across numpy/python types."""
    if isinstance(part, (bool, np.bool_)):
        return bool(part)
    if isinstance(part, (int, np.integer)):
        return int(part)
    if isinstance(part, (float, np.floating)):
        return float(part)
    if isinstance(part, str):
        return part
    if isinstance(part, (tuple, list)):
        return tuple(_canon(p) for p in part)
    if part is None:
        return None
    raise TypeError(f"unsupported job-key part: {part!r}")


@dataclass(frozen=True)
class RunSeed:
    """A master seed plus the job key that scopes it.

    job_key is a tuple of ints, floats, strings, bools, or nested tuples.
    Two RunSeeds with equal (master_seed, job_key) always yield identical
    generators; any difference in either field yields an independent stream.
    """

    master_seed: int
    job_key: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "job_key", _canon(tuple(self.job_key)))
        object.__setattr__(self, "master_seed", int(self.master_seed))

    def derive(self, *parts) -> "RunSeed":
        """A child seed with the given parts appended to the job key."""
        return RunSeed(self.master_seed, self.job_key + tuple(parts))

    def entropy(self) -> int:
        digest = hashlib.blake2b(
            repr((self.master_seed, self.job_key)).encode("utf-8"), digest_size=16
        ).digest()
        return int.from_bytes(digest, "little")

    def generator(self) -> np.random.Generator:
        """A fresh numpy Generator for this (master_seed, job_key)."""
        return np.random.default_rng(np.random.SeedSequence(self.entropy()))

    def label(self) -> str:
        """Short human-readable form used in persisted selection files."""
        if not self.job_key:
            return str(self.master_seed)
        return f"{self.master_seed}:" + "/".join(str(p) for p in self.job_key)


def ensure_seed(seed, default_key=("adhoc",)) -> RunSeed:
    """Coerce None or a bare int into a RunSeed; pass RunSeeds through."""
    if seed is None:
        return RunSeed(0, default_key)
    if isinstance(seed, RunSeed):
        return seed
    if isinstance(seed, (int, np.integer)):
        return RunSeed(int(seed), default_key)
    raise TypeError(f"expected RunSeed, int, or None, got {type(seed).__name__}")
