"""Exact arithmetic over the finite fields F_q, q = p^e.

Prime fields use plain modular arithmetic.  Extension fields are backed
by log/antilog tables over a canonical irreducible polynomial (the
lexicographically smallest monic irreducible of degree e over F_p), so
multiplication and inversion are O(1) lookups and the element order is
identical from run to run.

Elements are indexed 0..q-1.  The index is the base-p encoding of the
coefficient vector: index sum(c_j * p^j) stands for the element
sum(c_j * a^j) where `a` is a root of the canonical polynomial.  This
makes index 0 the additive identity and index 1 the multiplicative
identity, and gives downstream point indexing a fixed total order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

DEFAULT_MAX_ORDER = 1 << 14


def is_prime(n: int) -> bool:
    """Trial-division primality test, adequate for q <= 2^14."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _digits(value: int, p: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(value % p)
        value //= p
    return tuple(out)


def _poly_rem(num: list[int], den: tuple[int, ...], p: int) -> list[int]:
    """Remainder of num modulo the monic polynomial den (coeffs low->high)."""
    num = list(num)
    d = len(den) - 1
    while len(num) > d:
        lead = num[-1]
        if lead:
            shift = len(num) - 1 - d
            for i, c in enumerate(den):
                num[shift + i] = (num[shift + i] - lead * c) % p
        num.pop()
    while num and num[-1] == 0:
        num.pop()
    return num


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """True iff the monic polynomial has no monic divisor of degree 1..deg/2.

    Trial division over all candidate divisors; fine for the orders in
    scope (q <= 2^14).
    """
    degree = len(poly) - 1
    if degree == 1:
        return True
    if poly[0] == 0:  # divisible by x
        return False
    for d in range(1, degree // 2 + 1):
        for enc in range(p**d):
            div = _digits(enc, p, d) + (1,)
            if not _poly_rem(list(poly), div, p):
                return False
    return True


def _canonical_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e over F_p, by base-p encoding
    of the e low-order coefficients."""
    for enc in range(p**e):
        poly = _digits(enc, p, e) + (1,)
        if _is_irreducible(poly, p):
            return poly
    raise AssertionError(f"no irreducible of degree {e} over F_{p}")


class FieldSpec:
    """Immutable description of F_q with precomputed operation tables.

    All arithmetic is exposed twice: index-level methods (``add_i``,
    ``mul_i``, ...) operating on raw element indices for hot loops, and
    :class:`FieldElement` wrappers for readable call sites.  The spec is
    safe to share across worker processes; nothing mutates after
    construction.
    """

    __slots__ = ("p", "e", "q", "poly", "_coeffs", "_neg", "_log", "_antilog")

    def __init__(self, p: int, e: int, poly: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.poly = poly
        q = self.q
        self._coeffs = [_digits(i, p, e) for i in range(q)]
        self._neg = [self._from_coeffs([(-c) % p for c in self._coeffs[i]]) for i in range(q)]
        if e == 1:
            self._log = None
            self._antilog = None
        else:
            self._build_log_tables()

    def _from_coeffs(self, coeffs) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = acc * self.p + c
        return acc

    def _poly_mul_i(self, a: int, b: int) -> int:
        """Reference polynomial multiplication, used only to build tables."""
        p, e = self.p, self.e
        ca, cb = self._coeffs[a], self._coeffs[b]
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_rem(prod, self.poly, p)
        return self._from_coeffs(rem + [0] * (e - len(rem)))

    def _build_log_tables(self) -> None:
        q = self.q
        gen = None
        for cand in range(2, q):
            x, order = cand, 1
            while x != 1:
                x = self._poly_mul_i(x, cand)
                order += 1
                if order > q:
                    raise AssertionError("multiplicative order overflow")
            if order == q - 1:
                gen = cand
                break
        if gen is None:
            raise AssertionError(f"no generator found for q={q}")
        antilog = [0] * (q - 1)
        log = [0] * q
        x = 1
        for k in range(q - 1):
            antilog[k] = x
            log[x] = k
            x = self._poly_mul_i(x, gen)
        self._antilog = antilog
        self._log = log

    # -- index-level arithmetic -------------------------------------------

    def add_i(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        ca, cb = self._coeffs[a], self._coeffs[b]
        return self._from_coeffs([(x + y) % p for x, y in zip(ca, cb)])

    def sub_i(self, a: int, b: int) -> int:
        return self.add_i(a, self._neg[b])

    def neg_i(self, a: int) -> int:
        return self._neg[a]

    def mul_i(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return (a * b) % self.p
        return self._antilog[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv_i(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.q}")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._antilog[(-self._log[a]) % (self.q - 1)]

    def pow_i(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow_i(self.inv_i(a), -n)
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul_i(result, base)
            base = self.mul_i(base, base)
            n >>= 1
        return result

    # -- element-level API -------------------------------------------------

    def element(self, index: int) -> "FieldElement":
        if not 0 <= index < self.q:
            raise ValueError(f"index {index} out of range for F_{self.q}")
        return FieldElement(self, index)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, i) for i in range(self.q)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.e == other.e
            and self.poly == other.poly
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.poly))

    def __repr__(self) -> str:
        if self.e == 1:
            return f"FieldSpec(F_{self.q})"
        return f"FieldSpec(F_{self.q} = F_{self.p}[x]/{self.poly})"


@dataclass(frozen=True)
class FieldElement:
    """An element of F_q, identified by its index in the canonical order."""

    spec: FieldSpec
    index: int

    def _check(self, other: "FieldElement") -> None:
        if self.spec != other.spec:
            raise ValueError("mixed-field arithmetic")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.add_i(self.index, other.index))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.sub_i(self.index, other.index))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.mul_i(self.index, other.index))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.neg_i(self.index))

    def __pow__(self, n: int) -> "FieldElement":
        return FieldElement(self.spec, self.spec.pow_i(self.index, n))

    def inv(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv_i(self.index))

    def is_zero(self) -> bool:
        return self.index == 0

    def __repr__(self) -> str:
        return f"<{self.index} in F_{self.spec.q}>"


@lru_cache(maxsize=None)
def _make_field_cached(p: int, e: int, poly: tuple[int, ...] | None, max_order: int) -> FieldSpec:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    q = p**e
    if q > max_order:
        raise ValueError(f"q = {q} exceeds the configured maximum {max_order}")
    if e == 1:
        return FieldSpec(p, 1, (0, 1))
    if poly is None:
        poly = _canonical_irreducible(p, e)
    else:
        poly = tuple(c % p for c in poly)
        if len(poly) != e + 1 or poly[-1] != 1:
            raise ValueError(f"polynomial must be monic of degree {e}")
        if not _is_irreducible(poly, p):
            raise ValueError(f"polynomial {poly} is reducible over F_{p}")
    return FieldSpec(p, e, poly)


def make_field(
    p: int,
    e: int = 1,
    poly: tuple[int, ...] | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> FieldSpec:
    """Construct (or fetch from cache) the field F_{p^e}.

    ``poly`` optionally supplies the defining polynomial as coefficients
    low->high including the leading 1; it must be monic irreducible of
    degree e.  By default the canonical (lexicographically smallest)
    irreducible is used, which fixes the element order.
    """
    return _make_field_cached(p, e, tuple(poly) if poly is not None else None, max_order)


def factor_prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, e) with p prime, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if p * p > q:
            return (q, 1)  # q itself is prime
        if q % p == 0:
            e = 0
            rest = q
            while rest % p == 0:
                rest //= p
                e += 1
            if rest != 1:
                raise ValueError(f"{q} is not a prime power")
            return (p, e)
    raise ValueError(f"{q} is not a prime power")


def field_for_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    """F_q from its order alone."""
    p, e = factor_prime_power(q)
    return make_field(p, e, max_order=max_order)
