"""Modular arithmetic, CRT bijections and small finite fields.

Elements of GF(p^n) are integers encoding their coefficient vector over Z_p
in base p (coefficient of x^i is digit i).  Zero is the integer 0 and has no
logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

FIELD_CEILING = 1 << 16

# Conway polynomials, coefficients listed from x^0 up to the (monic) leading
# term.  Source: F. Luebeck, "Conway polynomials for finite fields"
# (https://www.math.rwth-aachen.de/~Frank.Luebeck/data/ConwayPol/).  Every
# Conway polynomial is primitive; gf_table re-checks that anyway.
PRIMITIVE_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (3, 7): (1, 0, 2, 0, 0, 0, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (5, 5): (3, 4, 0, 0, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, n) with q == p**n, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    n, rest = 0, q
    while rest % p == 0:
        rest //= p
        n += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, n


def inverse_mod(a: int, m: int) -> int:
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return pow(a, -1, m)


def units(m: int) -> list[int]:
    return [u for u in range(1, m) if gcd(u, m) == 1] if m > 1 else [0]


@dataclass(frozen=True)
class CRTMap:
    """Bijection Z_x × Z_y → Z_xy for coprime x, y."""

    x: int
    y: int

    def __post_init__(self):
        if self.x < 1 or self.y < 1 or gcd(self.x, self.y) != 1:
            raise ValueError(f"moduli {self.x} and {self.y} are not coprime")

    def __call__(self, a: int, b: int) -> int:
        x, y = self.x, self.y
        # z = a + x*t with x*t ≡ b - a (mod y)
        t = ((b - a) * pow(x, -1, y)) % y if y > 1 else 0
        return (a % x + x * t) % (x * y)

    def inverse(self, z: int) -> tuple[int, int]:
        return z % self.x, z % self.y


def crt_map(x: int, y: int) -> CRTMap:
    return CRTMap(x, y)


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Log/antilog tables for GF(p^n) built from a fixed primitive polynomial."""

    p: int
    n: int
    modulus: tuple[int, ...]
    exp: tuple[int, ...] = field(repr=False)
    log: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def primitive_element(self) -> int:
        return self.exp[1 % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out, place = 0, 1
        while a:
            out += ((-(a % p)) % p) * place
            a //= p
            place *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        e, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            e += 1
        return e

    def subfield(self, e: int) -> list[int]:
        """Elements of the subfield GF(p^e), e | n, sorted by code."""
        if self.n % e:
            raise ValueError(f"GF({self.p}^{e}) is not a subfield of GF({self.q})")
        step = (self.q - 1) // (self.p**e - 1)
        return sorted([0] + [self.exp[i] for i in range(0, self.q - 1, step)])


def _times_x(code: int, p: int, n: int, modulus: tuple[int, ...]) -> int:
    digits = [(code // p**i) % p for i in range(n)]
    top = digits[-1]
    shifted = [0] + digits[:-1]
    # x^n = -(c_0 + c_1 x + ... + c_{n-1} x^{n-1})
    reduced = [(d - top * c) % p for d, c in zip(shifted, modulus[:-1])]
    return sum(d * p**i for i, d in enumerate(reduced))


_TABLES: dict[tuple[int, int], FieldTable] = {}


def gf_table(p: int, n: int) -> FieldTable:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be positive")
    if p**n > FIELD_CEILING:
        raise ValueError(f"GF({p}^{n}) exceeds the field ceiling {FIELD_CEILING}")
    key = (p, n)
    if key in _TABLES:
        return _TABLES[key]
    if key not in PRIMITIVE_POLYNOMIALS:
        raise ValueError(f"no primitive polynomial tabulated for GF({p}^{n})")
    modulus = PRIMITIVE_POLYNOMIALS[key]
    q = p**n
    exp = [1]
    for _ in range(q - 2):
        exp.append(_times_x(exp[-1], p, n, modulus))
    if q > 2 and _times_x(exp[-1], p, n, modulus) != 1 or len(set(exp)) != q - 1:
        raise ValueError(f"tabulated polynomial for GF({p}^{n}) is not primitive")
    log = [-1] * q
    for i, a in enumerate(exp):
        log[a] = i
    table = FieldTable(p, n, modulus, tuple(exp), tuple(log))
    _TABLES[key] = table
    return table


def gf(q: int) -> FieldTable:
    """Field table for GF(q), q a prime power."""
    return gf_table(*prime_power(q))
