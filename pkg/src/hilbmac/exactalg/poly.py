"""Sparse multivariate Laurent polynomials over a fixed, globally ordered alphabet.

Monomials are tuples of (variable_index, exponent) pairs, sorted by index,
with nonzero exponents; exponents may be negative (Laurent).  Coefficients
are arbitrary-precision Python ints.  The alphabet is frozen at import time;
auxiliary variables (z1, x1, ...) register at the end and never reorder the
base names, so canonical forms are stable across a run.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Tuple

Monomial = Tuple[Tuple[int, int], ...]

#: exponents are kept far below this bound; exceeding it indicates a runaway
#: computation rather than a legitimate value.
EXPONENT_LIMIT = 2 ** 62

BASE_ALPHABET = ("q", "t", "u", "v", "t1", "t2", "w1", "w2", "x", "y", "Q")


class ExponentOverflowError(ArithmeticError):
    """A Laurent exponent left the supported machine-integer range."""


class Alphabet:
    """Global ordered variable registry: base names plus appended auxiliaries."""

    def __init__(self):
        self._names = list(BASE_ALPHABET)
        self._index = {n: i for i, n in enumerate(self._names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}; register auxiliaries first")

    def name(self, idx: int) -> str:
        return self._names[idx]

    def register(self, name: str) -> int:
        """Register an auxiliary variable at the end of the order (idempotent)."""
        if name in self._index:
            return self._index[name]
        self._names.append(name)
        self._index[name] = len(self._names) - 1
        return self._index[name]

    def names(self) -> Tuple[str, ...]:
        return tuple(self._names)


ALPHABET = Alphabet()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, e in b:
        ne = d.get(i, 0) + e
        if ne:
            if abs(ne) > EXPONENT_LIMIT:
                raise ExponentOverflowError(f"exponent {ne} exceeds limit for var {ALPHABET.name(i)}")
            d[i] = ne
        else:
            d.pop(i)
    return tuple(sorted(d.items()))


def mono_inv(a: Monomial) -> Monomial:
    return tuple((i, -e) for i, e in a)


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return mono_mul(a, mono_inv(b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if monomial a divides b with nonnegative quotient exponents."""
    db = dict(b)
    for i, e in a:
        if db.get(i, 0) < e:
            return False
    return True


_MONO_KEY_CACHE: Dict[Monomial, tuple] = {}


def mono_key(a: Monomial):
    """Canonical term-order key: total absolute degree, then per-variable
    (index, -exponent) lexicographically.  Graded and multiplicative on the
    nonnegative cone, so it doubles as the division order."""
    k = _MONO_KEY_CACHE.get(a)
    if k is None:
        k = (sum(abs(e) for _, e in a), tuple((i, -e) for i, e in a))
        if len(_MONO_KEY_CACHE) < 1_000_000:
            _MONO_KEY_CACHE[a] = k
    return k


class _MaxFirst:
    """Heap wrapper ordering monomials largest-key first."""

    __slots__ = ("key", "mono")

    def __init__(self, mono: Monomial):
        self.key = mono_key(mono)
        self.mono = mono

    def __lt__(self, other: "_MaxFirst") -> bool:
        return self.key > other.key


def mono_str(a: Monomial) -> str:
    if not a:
        return "1"
    parts = []
    for i, e in a:
        n = ALPHABET.name(i)
        parts.append(n if e == 1 else f"{n}^{e}")
    return "*".join(parts)


class LaurentPoly:
    """Immutable sparse Laurent polynomial with int coefficients."""

    __slots__ = ("terms", "_key")

    def __init__(self, terms: Dict[Monomial, int]):
        self.terms = {m: c for m, c in terms.items() if c}
        self._key = None

    # -- constructors ------------------------------------------------------
    @staticmethod
    def const(c: int) -> "LaurentPoly":
        return LaurentPoly({(): int(c)} if c else {})

    @staticmethod
    def var(name: str, exp: int = 1) -> "LaurentPoly":
        if exp == 0:
            return LaurentPoly.const(1)
        return LaurentPoly({((ALPHABET.index(name), exp),): 1})

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> int:
        if not self.terms:
            return 0
        return self.terms.get((), 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = dict(self.terms)
        for m, c in other.terms.items():
            nc = d.get(m, 0) + c
            if nc:
                d[m] = nc
            else:
                d.pop(m, None)
        return LaurentPoly(d)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero() or other.is_zero():
            return LaurentPoly({})
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        d: Dict[Monomial, int] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = mono_mul(ma, mb)
                nc = d.get(m, 0) + ca * cb
                if nc:
                    d[m] = nc
                else:
                    d.pop(m, None)
        return LaurentPoly(d)

    def scale(self, c: int) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly({})
        return LaurentPoly({m: c * v for m, v in self.terms.items()})

    def mono_shift(self, mono: Monomial) -> "LaurentPoly":
        if not mono:
            return self
        return LaurentPoly({mono_mul(m, mono): c for m, c in self.terms.items()})

    # -- normal form -------------------------------------------------------
    def primitive(self) -> Tuple[int, Monomial, "LaurentPoly"]:
        """Decompose as content * monomial * primitive polynomial.

        Monomial content is the per-variable minimum exponent, so the
        primitive part has no common monomial factor and no negative
        exponents.  The integer content carries the sign that makes the
        primitive part's first term in the canonical order positive.
        """
        if self.is_zero():
            return 0, (), LaurentPoly({})
        mins: Dict[int, int] = {}
        first = True
        for m in self.terms:
            dm = dict(m)
            if first:
                mins = dict(dm)
                first = False
            else:
                for i in list(mins):
                    mins[i] = min(mins[i], dm.get(i, 0))
                for i in dm:
                    if i not in mins:
                        mins[i] = min(0, dm[i])
        mono = tuple(sorted((i, e) for i, e in mins.items() if e))
        inv = mono_inv(mono)
        shifted = {mono_mul(m, inv): c for m, c in self.terms.items()}
        g = 0
        for c in shifted.values():
            g = math.gcd(g, c)
        if shifted[min(shifted, key=mono_key)] < 0:
            g = -g
        prim = LaurentPoly({m: c // g for m, c in shifted.items()})
        return g, mono, prim

    def content(self) -> Tuple[int, Monomial]:
        g, mono, _ = self.primitive()
        return g, mono

    def leading(self) -> Tuple[Monomial, int]:
        """Maximal term in the graded canonical order (division leading term)."""
        m = max(self.terms, key=mono_key)
        return m, self.terms[m]

    def divide_exact(self, divisor: "LaurentPoly"):
        """Exact division; returns quotient LaurentPoly or None if not divisible.

        Both operands must have nonnegative exponents (primitive factors do).
        The remainder's leading term strictly decreases in the graded order,
        so the loop terminates at zero (divisible) or a failed step (not).
        Remainder maxima come from a lazy max-heap rather than a scan.
        """
        import heapq

        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return LaurentPoly({})
        dlm, dlc = divisor.leading()
        dtail = [(m, c) for m, c in divisor.terms.items() if m != dlm]
        rem = dict(self.terms)
        heap = [_MaxFirst(m) for m in rem]
        heapq.heapify(heap)
        quot: Dict[Monomial, int] = {}
        while heap:
            rlm = heapq.heappop(heap).mono
            rlc = rem.get(rlm, 0)
            if not rlc:
                continue  # stale entry
            if not mono_divides(dlm, rlm) or rlc % dlc:
                return None
            qm = mono_div(rlm, dlm)
            qc = rlc // dlc
            quot[qm] = qc
            del rem[rlm]
            for m, c in dtail:
                mm = mono_mul(m, qm)
                old = rem.get(mm, 0)
                nc = old - qc * c
                if nc:
                    rem[mm] = nc
                    if not old:
                        heapq.heappush(heap, _MaxFirst(mm))
                else:
                    rem.pop(mm, None)
        return LaurentPoly(quot) if not rem else None

    # -- evaluation / substitution ------------------------------------------
    def eval(self, bindings: Dict[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            term = Fraction(c)
            for i, e in m:
                term *= bindings[i] ** e
            total += term
        return total

    def subs(self, bindings: Dict[int, object], one, mul, add, power):
        """Generic substitution with caller-supplied ring operations."""
        total = None
        for m, c in self.terms.items():
            term = one * c
            for i, e in m:
                term = mul(term, power(bindings[i], e))
            total = term if total is None else add(total, term)
        return total

    def variables(self) -> Tuple[int, ...]:
        seen = set()
        for m in self.terms:
            for i, _ in m:
                seen.add(i)
        return tuple(sorted(seen))

    # -- comparison / rendering ---------------------------------------------
    def key(self):
        if self._key is None:
            self._key = tuple(sorted(((mono_key(m), m, c) for m, c in self.terms.items())))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms, key=mono_key):
            c = self.terms[m]
            body = mono_str(m)
            if body == "1":
                chunk = str(abs(c))
            elif abs(c) == 1:
                chunk = body
            else:
                chunk = f"{abs(c)}*{body}"
            if not out:
                out.append(chunk if c > 0 else f"-{chunk}")
            else:
                out.append(f"+ {chunk}" if c > 0 else f"- {chunk}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def poly_pow(p: LaurentPoly, n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("poly_pow needs n >= 0")
    out = LaurentPoly.const(1)
    base = p
    while n:
        if n & 1:
            out = out * base
        base = base * base if n > 1 else base
        n >>= 1
    return out
