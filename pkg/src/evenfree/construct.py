"""Direct constructions: Bose triple systems, Singer and affine geometries,
cyclic difference matrices and orthogonal arrays."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import crt_map, gf, inverse_mod, is_prime, prime_power
from .core import CyclicDesign, SetSystem, canonical_translate, orbit_reps
from .verify import check_difference_coverage, check_dm, check_oa

Matrix = tuple[tuple[int, ...], ...]


class ConstructionError(ValueError):
    """Parameters outside a construction's domain."""


@dataclass(frozen=True)
class DifferenceMatrix:
    """k × v matrix over Z_v; validity is judged by :func:`check_dm`."""

    v: int
    k: int
    entries: Matrix

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if len(rows) != self.k or any(len(r) != self.v for r in rows):
            raise ValueError(f"difference matrix must be {self.k} x {self.v}")
        object.__setattr__(self, "entries", rows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)


@dataclass(frozen=True)
class OrthogonalArray:
    """t × s² array over symbols 0..s-1, optionally with a known parallel class."""

    s: int
    t: int
    entries: Matrix
    parallel_class: tuple[int, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if len(rows) != self.t or any(len(r) != self.s * self.s for r in rows):
            raise ValueError(f"orthogonal array must be {self.t} x {self.s * self.s}")
        object.__setattr__(self, "entries", rows)
        if self.parallel_class is not None:
            pc = tuple(sorted(int(c) for c in self.parallel_class))
            if len(pc) != self.s or any(
                sorted(rows[i][c] for c in pc) != list(range(self.s)) for i in range(self.t)
            ):
                raise ValueError("declared parallel class does not contain every symbol once per row")
            object.__setattr__(self, "parallel_class", pc)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)


def _ensure(result, what: str) -> None:
    if not result:
        raise AssertionError(f"{what} failed verification: {result.message}")


# ---------------------------------------------------------------- triple systems


def bose(x: int) -> CyclicDesign:
    """Cyclic anti-Pasch S(2,3,3x) from the quasigroup a∘b = (a+b)/2 on Z_x."""
    if x < 1 or x % 2 == 0:
        raise ConstructionError(f"x = {x} must be a positive odd integer")
    if x % 3 == 0:
        raise ConstructionError(f"x = {x} is divisible by 3, so 9 divides 3x")
    if x % 7 == 0:
        raise ConstructionError(f"x = {x} is divisible by 7")
    half = inverse_mod(2, x) if x > 1 else 0
    to_z = crt_map(x, 3)
    triples = [{to_z(a, 0), to_z(a, 1), to_z(a, 2)} for a in range(x)]
    for i in range(3):
        for a in range(x):
            for b in range(a + 1, x):
                c = (a + b) * half % x
                triples.append({to_z(a, i), to_z(b, i), to_z(c, (i + 1) % 3)})
    s = SetSystem(3 * x, 3, tuple(sorted(tuple(sorted(t)) for t in triples)))
    d = orbit_reps(s)
    _ensure(check_difference_coverage(d), f"bose({x})")
    return d


# ---------------------------------------------------------------- geometries


def singer_pg(m: int, q: int) -> CyclicDesign:
    """Points and lines of PG(m, q) under a Singer cycle: cyclic S(2, q+1, (q^{m+1}-1)/(q-1)).

    Point i is the class of α^i modulo GF(q)*, α primitive in GF(q^{m+1}).
    """
    if m < 2:
        raise ConstructionError("dimension m must be at least 2")
    prime_power(q)
    field = gf(q ** (m + 1))
    big = field.q
    v = (big - 1) // (q - 1)
    scalars = [field.exp[i] for i in range(0, big - 1, v)]  # GF(q)*
    lines = set()
    for j in range(1, v):
        aj = field.exp[j]
        # the line spanned by 1 and α^j; 1 + β·α^j is never 0 because α^j ∉ GF(q)
        pts = {0, j} | {field.log[field.add(1, field.mul(beta, aj))] % v for beta in scalars}
        lines.add(canonical_translate(sorted(pts), v))
    notes = ()
    if q % 2 == 0:
        notes = ("even q: even configurations on q+2 blocks expected",)
    d = CyclicDesign.from_blocks(v, q + 1, lines, "design", notes)
    _ensure(check_difference_coverage(d), f"singer_pg({m},{q})")
    return d


def ag_packing(m: int, q: int) -> CyclicDesign:
    """Maximum cyclic packing of order q^m - 1 from AG(m, q) minus the lines through 0.

    Point i is α^i in GF(q^m)*; multiplication by α is the cyclic action.
    """
    if m < 2:
        raise ConstructionError("dimension m must be at least 2")
    prime_power(q)
    field = gf(q**m)
    n = field.q - 1
    step = n // (q - 1)
    scalars = [0] + [field.exp[i] for i in range(0, n, step)]  # GF(q)
    blocks = set()
    # lines through the point 1 with a direction outside GF(q); all others are translates
    for j in range(1, step):
        d = field.exp[j]
        line = [field.add(1, field.mul(lam, d)) for lam in scalars]
        blocks.add(canonical_translate(sorted(field.log[c] for c in line), n))
    design = CyclicDesign.from_blocks(n, q, blocks, "packing")
    _ensure(check_difference_coverage(design), f"ag_packing({m},{q})")
    expected = (q ** (m - 1) * n - n) // (q - 1)
    assert design.block_count() == expected, (design.block_count(), expected)
    return design


# ---------------------------------------------------------------- difference matrices


def vandermonde_dm(v: int, k: int) -> DifferenceMatrix:
    """Cyclic (v, k) difference matrix with entries i·j mod v."""
    if v < 1 or k < 1:
        raise ConstructionError("v and k must be positive")
    g = math.gcd(v, math.factorial(k - 1))
    if g != 1:
        bad = min(f for f in range(2, k) if is_prime(f) and v % f == 0)
        raise ConstructionError(f"gcd({v}, {k - 1}!) = {g}: prime {bad} divides {v}")
    dm = DifferenceMatrix(v, k, tuple(tuple(i * j % v for j in range(v)) for i in range(k)))
    _ensure(check_dm(dm), f"vandermonde_dm({v},{k})")
    return dm


def dm_product(a: DifferenceMatrix, b: DifferenceMatrix) -> DifferenceMatrix:
    """(vw, k) difference matrix from (v, k) and (w, k) ones; column (j2, j1) at j2*v + j1."""
    if a.k != b.k:
        raise ConstructionError(f"row counts differ: {a.k} and {b.k}")
    for m, name in ((a, "first"), (b, "second")):
        res = check_dm(m)
        if not res:
            raise ConstructionError(f"{name} ingredient is not a difference matrix: {res.message}")
    v, w = a.v, b.v
    rows = tuple(
        tuple((a.entries[i][j1] + v * b.entries[i][j2]) % (v * w) for j2 in range(w) for j1 in range(v))
        for i in range(a.k)
    )
    dm = DifferenceMatrix(v * w, a.k, rows)
    _ensure(check_dm(dm), "dm_product")
    return dm


def normalize_dm(m: DifferenceMatrix) -> DifferenceMatrix:
    """Subtract each column's row-0 entry from the column, making row 0 zero."""
    res = check_dm(m)
    if not res:
        raise ConstructionError(f"not a difference matrix: {res.message}")
    top = m.entries[0] if m.k else ()
    rows = tuple(tuple((x - t) % m.v for x, t in zip(row, top)) for row in m.entries)
    return DifferenceMatrix(m.v, m.k, rows)


# ---------------------------------------------------------------- orthogonal arrays


def oa_odd_prime(k: int) -> OrthogonalArray:
    """OA(k, k) from the blocks K_a[i][j] = i·j + a (mod k), placed side by side.

    Column a·k + j holds column j of K_a; the columns j = 0 are constant and
    form the parallel class.
    """
    if k < 3 or not is_prime(k):
        raise ConstructionError(f"k = {k} is not an odd prime")
    rows = tuple(tuple((i * j + a) % k for a in range(k) for j in range(k)) for i in range(k))
    oa = OrthogonalArray(k, k, rows, tuple(a * k for a in range(k)))
    _ensure(check_oa(oa), f"oa_odd_prime({k})")
    return oa


def oa_prime_power(q: int) -> OrthogonalArray:
    """OA(q, q) over GF(q): row s, column (a, b) holds s·a + b.

    Symbols are field element codes; column index is a·q + b, and the
    columns with a = 0 form the parallel class.
    """
    field = gf(q)
    rows = tuple(tuple(field.add(field.mul(s, a), b) for a in range(q) for b in range(q)) for s in range(q))
    oa = OrthogonalArray(q, q, rows, tuple(range(q)))
    _ensure(check_oa(oa), f"oa_prime_power({q})")
    return oa
