"""Recursive product constructions for cyclic (k+1)-even-free S(2,k,vw).

Every output is re-verified by difference coverage before it is returned;
ingredient even-freeness is re-verified unless ``trust=True``.
"""

from __future__ import annotations

from typing import Sequence

from .algebra import is_prime
from .construct import DifferenceMatrix, OrthogonalArray, normalize_dm, oa_odd_prime
from .core import CyclicDesign, develop, is_short_block
from .verify import check_difference_coverage, check_dm, check_oa, find_generalized_pasch


class CompositionError(ValueError):
    """An ingredient violates a precondition of a product construction."""


def _require_design(d: CyclicDesign, k: int, name: str) -> None:
    if d.kind != "design":
        raise CompositionError(f"{name} is a packing, not a Steiner 2-design")
    if d.k != k:
        raise CompositionError(f"{name} has block size {d.k}, expected {k}")
    res = check_difference_coverage(d)
    if not res:
        raise CompositionError(f"{name} is not a cyclic S(2,{k},{d.v}): {res.message}")


def _require_pasch_free(d: CyclicDesign, name: str, trust: bool) -> None:
    if trust:
        return
    witness = find_generalized_pasch(develop(d))
    if witness is not None:
        raise CompositionError(
            f"{name} is not {d.k + 1}-even-free: blocks {list(witness.indices)} form a generalized Pasch"
        )


def _require_congruence(v: int, k: int, allowed: Sequence[int], name: str) -> None:
    mod = k * (k - 1)
    if v % mod not in allowed:
        want = " or ".join(str(a) for a in allowed)
        raise CompositionError(f"{name}: order {v} is {v % mod} mod {mod}, need {want}")


EVEN_K_NOTE = "even k: generalized Pasch freeness depends on the matrix; verify before relying on it"


def _product(bv: CyclicDesign, cw: CyclicDesign, columns: Sequence[Sequence[int]]) -> CyclicDesign:
    """Blocks {x_i + c_i·v} for every ordered base block x of bv and column c,
    plus the blocks {y_i·v} for every base block y of cw."""
    v, w, k = bv.v, cw.v, bv.k
    n = v * w
    reps = [
        [(x + c * v) % n for x, c in zip(xs, col)]
        for col in columns
        for xs in bv.ordered_base_blocks()
    ]
    reps += [[y * v for y in ys] for ys in cw.ordered_base_blocks()]
    notes = (EVEN_K_NOTE,) if k % 2 == 0 else ()
    out = CyclicDesign.from_blocks(n, k, reps, notes=notes)
    expected = w * len(bv.base_blocks) + len(cw.base_blocks)
    assert len(out.base_blocks) == expected, (len(out.base_blocks), expected)
    res = check_difference_coverage(out)
    if not res:
        raise AssertionError(f"composed design fails difference coverage: {res.message}")
    return out


def _columns(m: DifferenceMatrix) -> list[tuple[int, ...]]:
    return [m.column(j) for j in range(m.v)]


def compose_dm(bv: CyclicDesign, cw: CyclicDesign, m: DifferenceMatrix, trust: bool = False) -> CyclicDesign:
    """Cyclic (k+1)-even-free S(2,k,vw) for even k from a cyclic (w,k) difference matrix."""
    k = bv.k
    if k % 2:
        raise CompositionError(f"block size k = {k} must be even")
    _require_design(bv, k, "first ingredient")
    _require_design(cw, k, "second ingredient")
    _require_congruence(bv.v, k, (1,), "first ingredient")
    _require_congruence(cw.v, k, (1,), "second ingredient")
    if (m.v, m.k) != (cw.v, k):
        raise CompositionError(f"difference matrix must be ({cw.v},{k}), got ({m.v},{m.k})")
    res = check_dm(m)
    if not res:
        raise CompositionError(f"not a difference matrix: {res.message}")
    _require_pasch_free(bv, "first ingredient", trust)
    _require_pasch_free(cw, "second ingredient", trust)
    # column shifts only translate blocks, so normalizing does not change the orbits
    return _product(bv, cw, _columns(normalize_dm(m)))


def _constant_parallel_class(a: OrthogonalArray) -> tuple[list[tuple[int, ...]], list[int]]:
    """Rename symbols row by row so the parallel class columns are constant.

    Returns all columns of the relabelled array and the indices of the
    parallel class, ordered so that class column c holds symbol c.
    """
    pc = a.parallel_class
    if pc is None:
        res = check_oa(a)
        classes = res.data.get("parallel_classes", []) if res else []
        if not classes:
            raise CompositionError("orthogonal array has no parallel class")
        pc = classes[0]
    order = sorted(pc, key=lambda c: a.entries[0][c])
    renames = [{a.entries[i][c]: sym for sym, c in enumerate(order)} for i in range(a.t)]
    rows = [[renames[i][x] for x in a.entries[i]] for i in range(a.t)]
    cols = [tuple(rows[i][j] for i in range(a.t)) for j in range(a.s * a.s)]
    return cols, order


def _oa_difference_matrix(a: OrthogonalArray, cw: CyclicDesign) -> DifferenceMatrix:
    """Zero column followed by a relabelled copy of the OA minus its parallel class per base block of cw."""
    k, w = a.s, cw.v
    cols, pc = _constant_parallel_class(a)
    truncated = [col for j, col in enumerate(cols) if j not in set(pc)]
    assert len(truncated) == k * (k - 1)
    columns = [tuple([0] * k)]
    for ys in cw.ordered_base_blocks():
        columns += [tuple(ys[sym] for sym in col) for col in truncated]
    assert len(columns) == 1 + k * (k - 1) * len(cw.base_blocks) == w, (len(columns), w)
    m = DifferenceMatrix(w, k, tuple(tuple(col[i] for col in columns) for i in range(k)))
    res = check_dm(m)
    if not res:
        raise AssertionError(f"assembled matrix is not a difference matrix: {res.message}")
    return m


def compose_oa(bv: CyclicDesign, cw: CyclicDesign, a: OrthogonalArray, trust: bool = False) -> CyclicDesign:
    """Cyclic (k+1)-even-free S(2,k,vw) from an OA(k,k) with a parallel class."""
    k = bv.k
    _require_design(bv, k, "first ingredient")
    _require_design(cw, k, "second ingredient")
    _require_congruence(bv.v, k, (1,), "first ingredient")
    _require_congruence(cw.v, k, (1,), "second ingredient")
    if (a.s, a.t) != (k, k):
        raise CompositionError(f"need an OA({k},{k}), got OA({a.t},{a.s})")
    if not check_oa(a):
        raise CompositionError("not an orthogonal array")
    _require_pasch_free(bv, "first ingredient", trust)
    _require_pasch_free(cw, "second ingredient", trust)
    m = _oa_difference_matrix(a, cw)
    return _product(bv, cw, _columns(m))


def _odd_prime_short_matrix(k: int, cw: CyclicDesign) -> DifferenceMatrix:
    """Difference matrix over Z_w for w ≡ k (mod k(k-1))."""
    w = cw.v
    oa = oa_odd_prime(k)
    constant = set(oa.parallel_class)
    truncated = [oa.column(j) for j in range(k * k) if j not in constant]
    columns: list[tuple[int, ...]] = []
    for ys in cw.ordered_base_blocks():
        if is_short_block(ys, w):
            continue
        columns += [tuple(ys[sym] for sym in col) for col in truncated]
    # (w/k)·K_0, whose column 0 is the zero column
    columns += [tuple((w // k) * (i * j % k) % w for i in range(k)) for j in range(k)]
    assert len(columns) == w, (len(columns), w)
    m = DifferenceMatrix(w, k, tuple(tuple(col[i] for col in columns) for i in range(k)))
    res = check_dm(m)
    if not res:
        raise AssertionError(f"assembled matrix is not a difference matrix: {res.message}")
    return m


def compose_odd_prime(bv: CyclicDesign, cw: CyclicDesign, trust: bool = False) -> CyclicDesign:
    """Cyclic (k+2)-even-free S(2,k,vw) for odd prime k, with w ≡ 1 or k (mod k(k-1))."""
    k = bv.k
    if k < 3 or not is_prime(k):
        raise CompositionError(f"block size k = {k} is not an odd prime")
    _require_design(bv, k, "first ingredient")
    _require_design(cw, k, "second ingredient")
    _require_congruence(bv.v, k, (1,), "first ingredient")
    _require_congruence(cw.v, k, (1, k), "second ingredient")
    if cw.v % (k * (k - 1)) == 1:
        return compose_oa(bv, cw, oa_odd_prime(k), trust)
    _require_pasch_free(bv, "first ingredient", trust)
    _require_pasch_free(cw, "second ingredient", trust)
    m = _odd_prime_short_matrix(k, cw)
    return _product(bv, cw, _columns(m))


def compose_sts(b3v: CyclicDesign, c3w: CyclicDesign, trust: bool = False) -> CyclicDesign:
    """Cyclic 5-even-free S(2,3,3vw) from cyclic 5-even-free S(2,3,3v) and S(2,3,3w)."""
    for d, name in ((b3v, "first ingredient"), (c3w, "second ingredient")):
        _require_design(d, 3, name)
        _require_congruence(d.v, 3, (3,), name)
        if d.short_block is None:
            raise CompositionError(f"{name} has no short orbit")
    _require_pasch_free(b3v, "first ingredient", trust)
    _require_pasch_free(c3w, "second ingredient", trust)
    v, w = b3v.v // 3, c3w.v // 3
    n = 3 * v * w
    reps = [
        [x, (y + 3 * i * v) % n, (z + 6 * i * v) % n]
        for (x, y, z) in b3v.ordered_base_blocks()
        if not is_short_block((x, y, z), b3v.v)
        for i in range(w)
    ]
    reps += [[a * v for a in abc] for abc in c3w.ordered_base_blocks()]
    out = CyclicDesign.from_blocks(n, 3, reps)
    expected = w * (v - 1) // 2 + (w + 1) // 2
    assert len(out.base_blocks) == expected, (len(out.base_blocks), expected)
    res = check_difference_coverage(out)
    if not res:
        raise AssertionError(f"composed design fails difference coverage: {res.message}")
    return out
