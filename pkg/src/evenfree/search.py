"""Backtracking search for cyclic r-even-free Steiner 2-designs.

Base blocks are placed one at a time.  The block covering the smallest
uncovered difference d is translated so that it contains 0 and d; every
difference family is reached exactly this way, so a search that finishes
without solutions is a nonexistence certificate.  After each placement the
partially developed system is checked for generalized Pasch configurations
through the new orbit.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from itertools import combinations

from .algebra import units
from .core import CyclicDesign, canonical_translate, develop, translate
from .verify import BudgetExhausted, check_difference_coverage, even_freeness, generalized_pasch_containing

log = logging.getLogger(__name__)

FOUND, EXHAUSTED, TIMEOUT = "found", "exhausted", "timeout"


@dataclass(frozen=True)
class SearchSpec:
    v: int
    k: int
    r: int
    limit: int | None = None
    budget: float | None = None
    reduce_multipliers: bool = False

    def __post_init__(self):
        if self.k < 2 or self.v < self.k:
            raise ValueError(f"need v >= k >= 2, got v={self.v}, k={self.k}")
        mod = self.k * (self.k - 1)
        if self.v % mod not in (1, self.k % mod):
            raise ValueError(f"no cyclic S(2,{self.k},{self.v}): v must be 1 or {self.k} mod {mod}")
        if self.r < self.k:
            raise ValueError(f"r = {self.r} is below the trivial bound k = {self.k}")
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be positive")


@dataclass
class SearchResult:
    status: str  # found | exhausted | timeout
    designs: list[CyclicDesign] = field(default_factory=list)
    complete: bool = False  # every branch was explored
    nodes: int = 0

    def __iter__(self):
        return iter(self.designs)

    def __len__(self) -> int:
        return len(self.designs)


class _PartialSystem:
    """Developed blocks of the base blocks placed so far, with pair lookup."""

    def __init__(self, v: int):
        self.v = v
        self.blocks: list[tuple[int, ...]] = []
        self.through: list[list[int]] = [[] for _ in range(v)]
        self.owner: dict[int, int] = {}

    def lookup(self, p: int, q: int) -> int:
        return self.owner.get(p * self.v + q, -1)

    def push_orbit(self, base: tuple[int, ...], length: int) -> int:
        start = len(self.blocks)
        v = self.v
        for t in range(length):
            b = translate(base, t, v)
            i = len(self.blocks)
            self.blocks.append(b)
            for x in b:
                self.through[x].append(i)
            for x, y in combinations(b, 2):
                self.owner[x * v + y] = i
                self.owner[y * v + x] = i
        return start

    def pop_orbit(self, start: int) -> None:
        v = self.v
        while len(self.blocks) > start:
            b = self.blocks.pop()
            for x in b:
                self.through[x].pop()
            for x, y in combinations(b, 2):
                del self.owner[x * v + y]
                del self.owner[y * v + x]

    def pasch_through(self, index: int) -> bool:
        gen = generalized_pasch_containing(index, self.blocks, self.through, self.lookup)
        return next(gen, None) is not None


def _canonical_family(v: int, blocks) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(canonical_translate(b, v) for b in blocks))


def search_difference_family(spec: SearchSpec) -> SearchResult:
    v, k, r = spec.v, spec.k, spec.r
    deadline = None if spec.budget is None else time.monotonic() + spec.budget
    prune = r >= k + 1
    partial = _PartialSystem(v)
    covered = [False] * v
    covered[0] = True
    family: list[tuple[int, ...]] = []
    solutions: list[CyclicDesign] = []
    seen: set[tuple[tuple[int, ...], ...]] = set()
    nodes = 0

    def accept(candidate: CyclicDesign) -> bool:
        # re-verify from scratch; pruning above is never the certificate
        if not check_difference_coverage(candidate):
            return False
        remaining = None if deadline is None else max(0.0, deadline - time.monotonic())
        return even_freeness(develop(candidate), r, budget=remaining).verdict

    def place(block: tuple[int, ...], length: int) -> bool:
        """Place an orbit; False if it creates a small even configuration."""
        start = partial.push_orbit(block, length)
        if prune and partial.pasch_through(start):
            partial.pop_orbit(start)
            return False
        return True

    def rec() -> bool:
        nonlocal nodes
        nodes += 1
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExhausted("search budget exhausted")
        d = next((x for x in range(1, v) if not covered[x]), None)
        if d is None:
            fam = _canonical_family(v, family)
            if fam in seen:
                return False
            seen.add(fam)
            cand = CyclicDesign(v, k, fam)
            if accept(cand):
                solutions.append(cand)
                log.debug("solution %s", fam)
                return spec.limit is not None and len(solutions) >= spec.limit
            return False
        return extend([0, d], {d, v - d})

    def extend(pts: list[int], diffs: set[int]) -> bool:
        if len(pts) == k:
            block = tuple(sorted(pts))
            for x in diffs:
                covered[x] = True
            family.append(block)
            stop = False
            if place(block, v):
                start = len(partial.blocks) - v
                stop = rec()
                partial.pop_orbit(start)
            family.pop()
            for x in diffs:
                covered[x] = False
            return stop
        lo = pts[-1] + 1 if len(pts) > 2 else 1
        for x in range(lo, v):
            if x in pts:
                continue
            new = set()
            ok = True
            for y in pts:
                for dd in ((x - y) % v, (y - x) % v):
                    if covered[dd] or dd in diffs or dd in new:
                        ok = False
                        break
                    new.add(dd)
                if not ok:
                    break
            if ok and extend(pts + [x], diffs | new):
                return True
        return False

    status_complete = False
    try:
        if v % (k * (k - 1)) == k % (k * (k - 1)):
            short = tuple(i * (v // k) for i in range(k))
            for x in range(v // k, v, v // k):
                covered[x] = True
            family.append(short)
            if place(short, v // k):
                stopped = rec()
            else:
                stopped = False
        else:
            stopped = rec()
        status_complete = not stopped
    except BudgetExhausted:
        designs = _finish(solutions, spec)
        return SearchResult(TIMEOUT, designs, False, nodes)
    designs = _finish(solutions, spec)
    return SearchResult(FOUND if designs else EXHAUSTED, designs, status_complete, nodes)


def _finish(solutions: list[CyclicDesign], spec: SearchSpec) -> list[CyclicDesign]:
    out = sorted(solutions, key=lambda d: d.base_blocks)
    return multiplier_reduce(out) if spec.reduce_multipliers else out


def multiply(d: CyclicDesign, u: int) -> CyclicDesign:
    """Image of a cyclic design under x -> u·x for a unit u of Z_v."""
    return CyclicDesign.from_blocks(d.v, d.k, [[u * x % d.v for x in b] for b in d.base_blocks], d.kind)


def multiplier_reduce(solutions: list[CyclicDesign]) -> list[CyclicDesign]:
    """One representative (the least image under all units) per multiplier class."""
    if not solutions:
        return []
    v, k = solutions[0].v, solutions[0].k
    if any((d.v, d.k) != (v, k) for d in solutions):
        raise ValueError("solutions have mixed parameters")
    us = units(v)
    reps = {min(multiply(d, u).base_blocks for u in us) for d in solutions}
    return [CyclicDesign(v, k, b, solutions[0].kind) for b in sorted(reps)]
