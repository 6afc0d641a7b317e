"""Counter-mode seeding so each (seed, stage, attempt) is reproducible alone."""
from __future__ import annotations

import zlib
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import LimitExceeded, PreconditionError

MASK64 = (1 << 64) - 1


def check_seed(seed: int) -> int:
    if not isinstance(seed, int) or seed < 0 or seed > MASK64:
        raise PreconditionError(f"seed must be an integer in [0, 2^64): {seed!r}")
    return seed


def stage_rng(seed: int, stage: str, attempt: int = 0) -> np.random.Generator:
    key = zlib.crc32(stage.encode())
    return np.random.default_rng(np.random.SeedSequence([check_seed(seed), key, attempt]))


def derive_seed(seed: int, index: int) -> int:
    """Per-trial 64-bit seed for trial ``index`` under master ``seed``."""
    ss = np.random.SeedSequence([check_seed(seed), index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def bernoulli_mask(rng: np.random.Generator, verts: Sequence[int], p: Fraction) -> int:
    """Keep each vertex independently with exact rational probability ``p``."""
    if not 0 <= p <= 1:
        raise PreconditionError(f"probability out of range: {p}")
    if not verts:
        return 0
    num, den = p.numerator, p.denominator
    if den >= 1 << 62:
        raise LimitExceeded("sampling denominator", den, 1 << 62)
    draws = rng.integers(0, den, size=len(verts))
    out = 0
    for v, x in zip(verts, draws):
        if x < num:
            out |= 1 << v
    return out
