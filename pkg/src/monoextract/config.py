"""Exact-computation limits and enumeration budgets.

Every exhaustive routine refuses instances above its limit instead of
quietly switching to a heuristic. ``MONOEXTRACT_BUDGET`` overrides the
default enumeration budget.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace


def _env_budget(default: int) -> int:
    raw = os.environ.get("MONOEXTRACT_BUDGET")
    if not raw:
        return default
    return int(raw, 0)


@dataclass(frozen=True)
class Limits:
    biclique_n: int = 64
    clique_n: int = 64
    chromatic_n: int = 20
    klst_n: int = 24
    antidirected_cycle_n: int = 16
    even_hole_n: int = 14
    odd_signing_n: int = 64
    signing_edges: int = 24
    orientation_edges: int = 22
    oracle_n: int = 14
    burling_level: int = 4
    enumeration_budget: int = 1 << 28

    def with_budget(self, budget: int | None) -> "Limits":
        if budget is None:
            return self
        return replace(self, enumeration_budget=budget)


def default_limits() -> Limits:
    return Limits(enumeration_budget=_env_budget(1 << 28))
