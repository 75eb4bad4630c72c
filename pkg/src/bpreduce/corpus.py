"""Seeded instance lists used by ``verify`` and the acceptance tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bp_core import BranchingProgram, random_bp

DENSITIES = (0.2, 0.3, 0.4, 0.5, 0.65)


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    W: int
    t: int
    density: float
    seed: int

    def build(self) -> BranchingProgram:
        return random_bp(self.n, self.W, self.t, self.seed, self.density)

    def label(self) -> str:
        return f"n={self.n} W={self.W} t={self.t} d={self.density} seed={self.seed}"


def _cycle(ns, Ws, ts, size: int, seed: int) -> list[InstanceSpec]:
    shapes = list(itertools.product(ns, Ws, ts))
    out = []
    for i in range(size):
        n, W, t = shapes[i % len(shapes)]
        density = DENSITIES[(i // len(shapes)) % len(DENSITIES)]
        out.append(InstanceSpec(n, W, t, density, seed * 100_003 + i))
    return out


def direct_corpus(size: int = 200, seed: int = 0) -> list[InstanceSpec]:
    return _cycle((2, 4, 6), (2, 3), (1, 2), size, seed)


def framework_corpus(size: int = 50, seed: int = 1) -> list[InstanceSpec]:
    return _cycle((2, 4), (2,), (1, 2), size, seed)
