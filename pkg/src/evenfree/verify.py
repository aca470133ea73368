"""Decision procedures for Steiner, cyclic, matrix and even-freeness properties.

Verifiers return a :class:`CheckResult` whose truth value is the verdict; a
failing check is a result, not an exception.  Searches that run out of time
raise :class:`BudgetExhausted` so that "no witness" is never reported for an
unfinished search.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from .core import (
    CyclicDesign,
    DesignError,
    SetSystem,
    blocks_through,
    cyclic_rep_indices,
    develop,
    is_short_block,
    point_mask,
    translate,
)

log = logging.getLogger(__name__)

WORKERS_ENV = "EVENFREE_WORKERS"
BRUTE_FORCE_MAX_BLOCKS = 26


class BudgetExhausted(RuntimeError):
    """A bounded search ran out of time before reaching a verdict.

    ``certified`` is the largest r for which r-even-freeness (or the
    corresponding partial result) was fully established.
    """

    def __init__(self, message: str, certified: int = 0):
        super().__init__(message)
        self.certified = certified


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    message: str = ""
    witness: Any = None
    data: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class EvenConfiguration:
    """Sorted indices of blocks of a set system covering each point evenly."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if not idx:
            raise ValueError("an even configuration needs at least one block")
        if len(set(idx)) != len(idx):
            raise ValueError("block indices must be distinct")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def blocks(self, s: SetSystem) -> list[tuple[int, ...]]:
        return [s.blocks[i] for i in self.indices]

    def is_valid_in(self, s: SetSystem) -> bool:
        return is_even(s, self.indices)


def is_even(s: SetSystem, indices: Sequence[int]) -> bool:
    """Independent parity recount, used to re-validate every witness."""
    counts: dict[int, int] = {}
    for i in indices:
        for x in s.blocks[i]:
            counts[x] = counts.get(x, 0) + 1
    return bool(indices) and len(set(indices)) == len(indices) and all(c % 2 == 0 for c in counts.values())


@dataclass(frozen=True)
class EvenFreenessReport:
    r_checked: int
    minimal_witness: EvenConfiguration | None
    verdict: bool  # True iff no even configuration of size <= r_checked

    @property
    def minimum_size(self) -> int | None:
        return None if self.minimal_witness is None else len(self.minimal_witness)


# ---------------------------------------------------------------- Steiner


def check_steiner(s: SetSystem) -> CheckResult:
    v = s.v
    counts = np.zeros(v * v, dtype=np.int64)
    if s.blocks:
        arr = np.asarray(s.blocks, dtype=np.int64)
        for i, j in combinations(range(s.k), 2):
            np.add.at(counts, arr[:, i] * v + arr[:, j], 1)
    counts = counts.reshape(v, v)
    upper = np.triu(np.ones((v, v), dtype=bool), 1)
    over = np.argwhere((counts > 1) & upper)
    if len(over):
        a, b = map(int, over[0])
        return CheckResult(False, f"pair {{{a},{b}}} covered {counts[a, b]} times", ((a, b), int(counts[a, b])))
    if s.kind == "design":
        missing = np.argwhere((counts == 0) & upper)
        if len(missing):
            a, b = map(int, missing[0])
            return CheckResult(False, f"pair {{{a},{b}}} not covered", ((a, b), 0))
    return CheckResult(True, f"every pair covered {'exactly' if s.kind == 'design' else 'at most'} once")


def check_difference_coverage(d: CyclicDesign) -> CheckResult:
    v, k = d.v, d.k
    short = [b for b in d.base_blocks if is_short_block(b, v)]
    full = [b for b in d.base_blocks if not is_short_block(b, v)]
    counts = np.zeros(v, dtype=np.int64)
    for b in full:
        for x, y in combinations(b, 2):
            counts[(x - y) % v] += 1
            counts[(y - x) % v] += 1
    if len(short) > 1:
        return CheckResult(False, f"{len(short)} short orbits; at most one is possible", short[1])
    step = v // k if short else None
    for dlt in range(1, v):
        c = int(counts[dlt])
        if step and dlt % step == 0:
            # the short block contributes k copies of each multiple of v/k
            if c:
                return CheckResult(False, f"difference {dlt} also covered by a full orbit", (dlt, c + k))
            continue
        if c > 1 or (c == 0 and d.kind == "design"):
            return CheckResult(False, f"difference {dlt} covered {c} times", (dlt, c))
    return CheckResult(True, "difference coverage exact" if d.kind == "design" else "differences distinct")


# ---------------------------------------------------------------- matrices


def check_dm(m) -> CheckResult:
    """Check a cyclic (v, k) difference matrix (object with v, k, entries)."""
    a = np.asarray(m.entries, dtype=np.int64)
    if a.ndim != 2 or a.shape != (m.k, m.v):
        raise ValueError(f"difference matrix has shape {a.shape}, expected {(m.k, m.v)}")
    if ((a < 0) | (a >= m.v)).any():
        return CheckResult(False, "entry outside Z_v")
    for r, r2 in combinations(range(m.k), 2):
        diffs = np.bincount((a[r] - a[r2]) % m.v, minlength=m.v)
        bad = np.flatnonzero(diffs != 1)
        if len(bad):
            x = int(bad[0])
            return CheckResult(False, f"rows {r},{r2}: difference {x} occurs {diffs[x]} times", (r, r2, x))
    return CheckResult(True, "every row-pair difference occurs once")


def _parallel_classes(cols: list[tuple[int, ...]], s: int, exhaustive: bool) -> list[tuple[int, ...]]:
    by_first: list[list[int]] = [[] for _ in range(s)]
    for c, col in enumerate(cols):
        by_first[col[0]].append(c)
    found: list[tuple[int, ...]] = []
    chosen: list[int] = []
    used_rows: list[set[int]] = [set() for _ in range(len(cols[0]))] if cols else []

    def extend(sym: int) -> bool:
        if sym == s:
            found.append(tuple(sorted(chosen)))
            return not exhaustive
        for c in by_first[sym]:
            col = cols[c]
            if any(x in used for x, used in zip(col, used_rows)):
                continue
            chosen.append(c)
            for x, used in zip(col, used_rows):
                used.add(x)
            stop = extend(sym + 1)
            chosen.pop()
            for x, used in zip(col, used_rows):
                used.discard(x)
            if stop:
                return True
        return False

    if cols:
        extend(0)
    return sorted(found)


def check_oa(a) -> CheckResult:
    """Check an OA(t, s) (object with s, t, entries) and list its parallel classes.

    Parallel classes are enumerated exhaustively for s <= 9; for larger s a
    single class is searched for.
    """
    s, t = a.s, a.t
    arr = np.asarray(a.entries, dtype=np.int64)
    if arr.shape != (t, s * s):
        raise ValueError(f"orthogonal array has shape {arr.shape}, expected {(t, s * s)}")
    if ((arr < 0) | (arr >= s)).any():
        return CheckResult(False, "symbol outside 0..s-1")
    for r, r2 in combinations(range(t), 2):
        pairs = np.bincount(arr[r] * s + arr[r2], minlength=s * s)
        bad = np.flatnonzero(pairs != 1)
        if len(bad):
            x = int(bad[0])
            return CheckResult(False, f"rows {r},{r2}: pair {divmod(x, s)} occurs {pairs[x]} times", (r, r2, divmod(x, s)))
    cols = [tuple(int(x) for x in arr[:, j]) for j in range(s * s)]
    classes = _parallel_classes(cols, s, exhaustive=s <= 9)
    return CheckResult(True, f"valid OA({t},{s}) with {len(classes)} parallel class(es) found",
                       data={"parallel_classes": classes, "exhaustive": s <= 9})


# ---------------------------------------------------------------- generalized Pasch


def _pair_owner(s: SetSystem) -> Callable[[int, int], int]:
    owner: dict[int, int] = {}
    v = s.v
    for i, b in enumerate(s.blocks):
        for x, y in combinations(b, 2):
            owner[x * v + y] = i
            owner[y * v + x] = i

    def lookup(p: int, q: int) -> int:
        return owner.get(p * v + q, -1)

    return lookup


def generalized_pasch_containing(
    first: int,
    blocks: Sequence[Sequence[int]],
    through: Sequence[Sequence[int]],
    owner: Callable[[int, int], int],
    above: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield (k+1)-block even configurations of a packing that contain ``first``.

    Such a configuration is k+1 pairwise intersecting blocks whose pairwise
    intersection points are all distinct.  With ``above`` set, the other
    blocks must have larger index.
    """
    base = blocks[first]
    k = len(base)
    chosen: list[int] = []
    used: set[int] = set(base)

    def extend(i: int) -> Iterator[tuple[int, ...]]:
        if i == k:
            yield tuple(sorted((first, *chosen)))
            return
        p = base[i]
        if i == 0:
            cands = [c for c in through[p] if c != first]
        else:
            cands = [owner(p, x) for x in blocks[chosen[0]] if x not in used]
        for c in cands:
            if c < 0 or (above is not None and c <= above):
                continue
            blk = blocks[c]
            new: list[int] = []
            for cj in chosen:
                meet = set(blk).intersection(blocks[cj])
                if len(meet) != 1:
                    break
                (x,) = meet
                if x in used or x in new:
                    break
                new.append(x)
            else:
                chosen.append(c)
                used.update(new)
                yield from extend(i + 1)
                chosen.pop()
                used.difference_update(new)

    yield from extend(0)


def _require_packing(s: SetSystem) -> None:
    res = check_steiner(SetSystem(s.v, s.k, s.blocks, "packing", validate=False))
    if not res:
        raise DesignError(f"not a packing: {res.message}")


def find_generalized_pasch(s: SetSystem) -> EvenConfiguration | None:
    """Smallest possible even configuration (k+1 blocks) of a packing, if any.

    For translation-closed systems only orbit representatives need to be
    tried as the distinguished block.
    """
    _require_packing(s)
    if not s.blocks:
        return None
    through = blocks_through(s)
    owner = _pair_owner(s)
    reps = cyclic_rep_indices(s)
    if reps is not None:
        starts, above_first = reps, False
    else:
        starts, above_first = range(len(s.blocks)), True
    for b0 in starts:
        for cfg in generalized_pasch_containing(b0, s.blocks, through, owner, b0 if above_first else None):
            witness = EvenConfiguration(cfg)
            assert witness.is_valid_in(s)
            return witness
    return None


# ---------------------------------------------------------------- bounded search


class _ParitySearch:
    """Depth-first search for even configurations of an exact size.

    Parities are Python integers used as point bitsets.  The next block must
    contain the lowest point of odd parity; a branch dies when the odd points
    outnumber what the remaining blocks could fix (k per block).
    """

    def __init__(self, s: SetSystem, deadline: float | None = None):
        self.k = s.k
        self.masks = [point_mask(b) for b in s.blocks]
        self.by_mask = {m: i for i, m in enumerate(self.masks)}
        self.through = blocks_through(s)
        self.deadline = deadline
        self.nodes = 0

    def configs(self, first: int, size: int, above: int | None, find_all: bool) -> set[tuple[int, ...]]:
        k, masks, through, by_mask = self.k, self.masks, self.through, self.by_mask
        found: set[tuple[int, ...]] = set()
        chosen = [first]
        in_use = {first}
        deadline = self.deadline
        lo = -1 if above is None else above

        def dfs(parity: int, t: int) -> bool:
            self.nodes += 1
            if deadline is not None and not self.nodes & 0x3FF and time.monotonic() > deadline:
                raise BudgetExhausted("time budget exhausted during even-configuration search")
            if parity == 0 or parity.bit_count() > k * t:
                return False
            if t == 1:
                j = by_mask.get(parity)
                if j is not None and j > lo and j not in in_use:
                    found.add(tuple(sorted(chosen + [j])))
                    return not find_all
                return False
            p = (parity & -parity).bit_length() - 1
            for j in through[p]:
                if j <= lo or j in in_use:
                    continue
                chosen.append(j)
                in_use.add(j)
                stop = dfs(parity ^ masks[j], t - 1)
                chosen.pop()
                in_use.discard(j)
                if stop:
                    return True
            return False

        if size == 1:
            return found  # blocks are nonempty
        dfs(masks[first], size - 1)
        return found


_worker_search: _ParitySearch | None = None


def _init_worker(s: SetSystem, deadline: float | None) -> None:
    global _worker_search
    _worker_search = _ParitySearch(s, deadline)


def _exists_task(args: tuple[int, int, int | None]) -> bool:
    first, size, above = args
    assert _worker_search is not None
    return bool(_worker_search.configs(first, size, above, find_all=False))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def even_freeness(s: SetSystem, r_max: int, budget: float | None = None,
                  workers: int | None = None) -> EvenFreenessReport:
    """Certify r_max-even-freeness or return a minimum even configuration.

    Sizes are searched in increasing order.  Among minimum-size witnesses the
    lexicographically least index tuple is returned, so the answer does not
    depend on search order or worker count.  Raises BudgetExhausted when
    ``budget`` seconds elapse first.
    """
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    deadline = None if budget is None else time.monotonic() + budget
    workers = default_workers() if workers is None else max(1, workers)
    search = _ParitySearch(s, deadline)
    reps = cyclic_rep_indices(s)
    n = len(s.blocks)
    pool = None
    if workers > 1 and n:
        pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(s, deadline))
    certified = 0
    try:
        for size in range(1, min(r_max, n) + 1):
            if (s.k * size) % 2:
                # total incidence of an even configuration is even
                certified = size
                continue
            if reps is not None:
                # any configuration translates onto one containing an orbit representative
                tasks = [(b, size, None) for b in reps]
            else:
                tasks = [(b, size, b) for b in range(n)]
            if pool is not None:
                exists = any(pool.map(_exists_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
            else:
                exists = any(search.configs(f, sz, a, find_all=False) for f, sz, a in tasks)
            if exists:
                witness = _lex_least(search, n, size)
                assert witness.is_valid_in(s)
                return EvenFreenessReport(r_max, witness, False)
            certified = size
    except BudgetExhausted as exc:
        raise BudgetExhausted(str(exc), certified) from None
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return EvenFreenessReport(r_max, None, True)


def _lex_least(search: _ParitySearch, n: int, size: int) -> EvenConfiguration:
    for b0 in range(n):
        found = search.configs(b0, size, b0, find_all=True)
        if found:
            return EvenConfiguration(min(found))
    raise AssertionError("configuration of this size was found but not re-found")


# ---------------------------------------------------------------- oracle


def brute_force_even_minimum(s: SetSystem, max_blocks: int = BRUTE_FORCE_MAX_BLOCKS) -> EvenConfiguration | None:
    """Exact minimum even configuration by enumerating every block subset."""
    b = len(s.blocks)
    if b > max_blocks:
        raise ValueError(f"{b} blocks exceed the brute-force limit of {max_blocks}")
    if b == 0:
        return None
    words = (s.v + 63) // 64
    bm = np.zeros((b, words), dtype=np.uint64)
    for i, blk in enumerate(s.blocks):
        for x in blk:
            bm[i, x // 64] |= np.uint64(1) << np.uint64(x % 64)
    low = min(b, 20)
    table = np.zeros((1, words), dtype=np.uint64)
    for i in range(low):
        table = np.concatenate([table, table ^ bm[i]])
    hits: list[int] = []
    for h in range(1 << (b - low)):
        hp = np.zeros(words, dtype=np.uint64)
        for i in range(b - low):
            if h >> i & 1:
                hp ^= bm[low + i]
        zero = np.flatnonzero((table == hp).all(axis=1))
        hits.extend(int(z) | (h << low) for z in zero)
    hits = [m for m in hits if m]
    if not hits:
        return None
    best = min(bin(m).count("1") for m in hits)
    tuples = [tuple(i for i in range(b) if m >> i & 1) for m in hits if bin(m).count("1") == best]
    return EvenConfiguration(min(tuples))


# ---------------------------------------------------------------- 2k witness


def two_orbit_witness(d: CyclicDesign) -> EvenConfiguration:
    """Even configuration on 2k blocks built from two blocks in different orbits.

    Indices refer to ``develop(d)``.
    """
    if len(d.base_blocks) < 2:
        raise DesignError("design has a single block orbit; no two-orbit witness exists")
    s = develop(d)
    index = s.index()
    v = d.v
    for b0, r1 in combinations(d.base_blocks, 2):
        a = b0[0]
        for anchor in r1:
            b1 = translate(r1, a - anchor, v)
            offs0 = [(x - a) % v for x in b0 if x != a]
            offs1 = [(x - a) % v for x in b1 if x != a]
            cfg = [b0] + [translate(b0, g, v) for g in offs1] + [b1] + [translate(b1, g, v) for g in offs0]
            if len(set(cfg)) != 2 * d.k:
                continue
            idx = [index[c] for c in cfg]
            if is_even(s, idx):
                return EvenConfiguration(idx)
    raise DesignError("no two-orbit even configuration found; is the input a cyclic Steiner 2-design?")
