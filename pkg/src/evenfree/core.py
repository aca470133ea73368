"""Set systems and their cyclic (orbit-representative) form."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import InitVar, dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Block = tuple[int, ...]
# A base block with a fixed point order (ascending for canonical blocks).
OrderedBaseBlock = tuple[int, ...]

KINDS = ("design", "packing")


class DesignError(ValueError):
    """A structural invariant of a set system or cyclic design is violated."""


class TranslationClosureError(DesignError):
    def __init__(self, missing: Block, source: Block):
        super().__init__(f"block {list(source)} has no translate {list(missing)} in the system")
        self.missing = missing
        self.source = source


def _as_block(points: Iterable[int]) -> Block:
    return tuple(sorted(int(x) for x in points))


def translate(block: Sequence[int], t: int, v: int) -> Block:
    return tuple(sorted((x + t) % v for x in block))


def canonical_translate(block: Sequence[int], v: int) -> Block:
    """Lexicographically least translate of ``block`` in Z_v."""
    return min(translate(block, -p, v) for p in block)


def is_short_block(block: Sequence[int], v: int) -> bool:
    k = len(block)
    if k < 2 or v % k:
        return False
    return canonical_translate(block, v) == tuple(i * (v // k) for i in range(k))


def orbit_length(block: Sequence[int], v: int) -> int:
    return v // len(block) if is_short_block(block, v) else v


@dataclass(frozen=True, eq=True)
class SetSystem:
    """Explicit block list on points 0..v-1.

    ``kind`` states the claim (every pair exactly once, or at most once);
    the claim itself is checked by :func:`evenfree.verify.check_steiner`.
    Pass ``validate=False`` to build deliberately malformed inputs such as
    systems with repeated blocks.
    """

    v: int
    k: int
    blocks: tuple[Block, ...]
    kind: str = "design"
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        object.__setattr__(self, "blocks", tuple(tuple(int(x) for x in b) for b in self.blocks))
        if self.kind not in KINDS:
            raise DesignError(f"unknown kind {self.kind!r}")
        if not validate:
            return
        for b in self.blocks:
            if len(b) != self.k:
                raise DesignError(f"block {list(b)} does not have size {self.k}")
            if any(x >= y for x, y in zip(b, b[1:])) or (b and (b[0] < 0 or b[-1] >= self.v)):
                raise DesignError(f"block {list(b)} is not a strictly increasing subset of 0..{self.v - 1}")
        if len(set(self.blocks)) != len(self.blocks):
            seen = set()
            dup = next(b for b in self.blocks if b in seen or seen.add(b))
            raise DesignError(f"duplicate block {list(dup)}")

    def __len__(self) -> int:
        return len(self.blocks)

    def index(self) -> dict[Block, int]:
        return {b: i for i, b in enumerate(self.blocks)}


@dataclass(frozen=True)
class CyclicDesign:
    """Orbit-representative form of a cyclic design or packing over Z_v.

    Base blocks are lexicographically least translates, kept in ascending
    order.  Whether an orbit is full or short is a property of its block.
    """

    v: int
    k: int
    base_blocks: tuple[Block, ...]
    kind: str = "design"
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        blocks = tuple(tuple(int(x) for x in b) for b in self.base_blocks)
        object.__setattr__(self, "base_blocks", blocks)
        if self.kind not in KINDS:
            raise DesignError(f"unknown kind {self.kind!r}")
        for b in blocks:
            if len(b) != self.k or len(set(b)) != self.k:
                raise DesignError(f"base block {list(b)} does not have {self.k} distinct points")
            if canonical_translate(b, self.v) != b:
                raise DesignError(f"base block {list(b)} is not the least translate of its orbit")
        if list(blocks) != sorted(set(blocks)):
            raise DesignError("base blocks must be distinct and in ascending order")

    @classmethod
    def from_blocks(cls, v: int, k: int, blocks: Iterable[Iterable[int]], kind: str = "design",
                    notes: tuple[str, ...] = ()) -> CyclicDesign:
        """Canonicalize arbitrary orbit representatives; repeated orbits are an error."""
        reps = [canonical_translate(_as_block(b), v) for b in blocks]
        if len(set(reps)) != len(reps):
            dup = next(r for r in reps if reps.count(r) > 1)
            raise DesignError(f"orbit of {list(dup)} is represented twice")
        return cls(v, k, tuple(sorted(reps)), kind, notes)

    @property
    def orbit_kinds(self) -> tuple[str, ...]:
        return tuple("short" if is_short_block(b, self.v) else "full" for b in self.base_blocks)

    @property
    def short_block(self) -> Block | None:
        return next((b for b in self.base_blocks if is_short_block(b, self.v)), None)

    @property
    def full_blocks(self) -> tuple[Block, ...]:
        return tuple(b for b in self.base_blocks if not is_short_block(b, self.v))

    def ordered_base_blocks(self) -> list[OrderedBaseBlock]:
        return list(self.base_blocks)

    def block_count(self) -> int:
        return sum(orbit_length(b, self.v) for b in self.base_blocks)


def develop(d: CyclicDesign) -> SetSystem:
    """All translates of all base blocks, sorted lexicographically."""
    blocks: set[Block] = set()
    expected = 0
    for b in d.base_blocks:
        orbit = {translate(b, t, d.v) for t in range(orbit_length(b, d.v))}
        expected += len(orbit)
        blocks |= orbit
    if len(blocks) != expected:
        raise DesignError("base blocks develop to repeated blocks")
    return SetSystem(d.v, d.k, tuple(sorted(blocks)), d.kind)


def orbit_reps(s: SetSystem) -> CyclicDesign:
    present = set(s.blocks)
    reps = set()
    for b in s.blocks:
        nxt = translate(b, 1, s.v)
        if nxt not in present:
            raise TranslationClosureError(nxt, b)
        reps.add(canonical_translate(b, s.v))
    return CyclicDesign(s.v, s.k, tuple(sorted(reps)), s.kind)


def cyclic_rep_indices(s: SetSystem) -> list[int] | None:
    """Indices of the orbit representatives if ``s`` is translation-closed, else None."""
    if not s.blocks:
        return []
    present = s.index()
    reps = []
    for i, b in enumerate(s.blocks):
        if translate(b, 1, s.v) not in present:
            return None
        if canonical_translate(b, s.v) == b:
            reps.append(i)
    return reps


def pair_index(s: SetSystem) -> dict[tuple[int, int], list[int]]:
    index: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, b in enumerate(s.blocks):
        for pair in combinations(b, 2):
            index[pair].append(i)
    return dict(index)


def blocks_through(s: SetSystem) -> list[list[int]]:
    through: list[list[int]] = [[] for _ in range(s.v)]
    for i, b in enumerate(s.blocks):
        for x in b:
            through[x].append(i)
    return through


def point_mask(block: Iterable[int]) -> int:
    m = 0
    for x in block:
        m |= 1 << x
    return m
