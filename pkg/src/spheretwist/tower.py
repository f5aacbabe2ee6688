"""Exact scalars in multi-quadratic extensions of the rationals.

A :class:`TowerScalar` is a finite sum ``sum(c_k * sqrt(k))`` where every ``k``
is a squarefree positive integer (``k == 1`` is the rational part) and every
``c_k`` is a nonzero rational.  Square roots of distinct
squarefree integers are linearly independent over the rationals, so two
scalars are equal exactly when their term maps are equal.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction

from gmpy2 import mpq
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Iterator, Tuple, Union

__all__ = [
    "Rational",
    "TowerScalar",
    "DomainError",
    "RadicandRefinementError",
    "as_rational",
    "parse_rational",
    "format_rational",
    "squarefree_decompose",
    "canonical_sqrt",
    "tower_mul",
    "tower_sign",
    "NEGATIVE",
    "ZERO",
    "POSITIVE",
]

Rational = Fraction

NEGATIVE, ZERO, POSITIVE = -1, 0, 1

# primes up to this bound are split off by trial division; what remains is
# handled as "large atoms" (see _decompose_large)
TRIAL_BOUND = 1 << 12


class DomainError(ValueError):
    """An argument lies outside the domain of an exact operation."""


class RadicandRefinementError(DomainError):
    """A new radicand would change the canonical form of existing scalars."""


def _small_primes(bound: int) -> Tuple[int, ...]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


_PRIMES = _small_primes(TRIAL_BOUND)


def _is_square(n: int) -> bool:
    r = math.isqrt(n)
    return r * r == n


# Large atoms: pairwise coprime non-squares with no prime factor below
# TRIAL_BOUND.  Products of distinct atoms and small primes have pairwise
# distinct square classes, which is all that coefficient-wise equality
# needs; no atom is ever factored.
_LARGE_ATOMS: set = set()
_LOCK = threading.RLock()
_GENERATION = 0
_ATOM_CACHE: Dict[int, Tuple[int, ...]] = {}


def _coprime_base(values: Iterable[int]) -> list:
    base: list = []
    todo = [v for v in values if v > 1]
    while todo:
        x = todo.pop()
        if x == 1:
            continue
        for i, b in enumerate(base):
            g = math.gcd(x, b)
            if g > 1:
                base.pop(i)
                todo.extend((g, b // g, x // g))
                break
        else:
            base.append(x)
    return base


def _split_atom(atom: int, g: int) -> None:
    global _GENERATION
    parts = _coprime_base([g, atom // g])
    if math.prod(parts) != atom or any(_is_square(p) for p in parts):
        raise RadicandRefinementError(
            f"radicand shares the factor {g} with an earlier radicand in a way "
            f"that would change existing canonical forms"
        )
    _LARGE_ATOMS.discard(atom)
    _LARGE_ATOMS.update(parts)
    _GENERATION += 1
    _ATOM_CACHE.clear()


def _decompose_large(c: int) -> Tuple[int, int]:
    s = k = 1
    with _LOCK:
        while c > 1:
            if _is_square(c):
                s *= math.isqrt(c)
                break
            hit = None
            for a in _LARGE_ATOMS:
                g = math.gcd(c, a)
                if g > 1:
                    hit = (a, g)
                    break
            if hit is None:
                _LARGE_ATOMS.add(c)
                k *= c
                break
            a, g = hit
            if g != a:
                _split_atom(a, g)
                continue
            c //= a
            if c % a == 0:
                c //= a
                s *= a
            else:
                k *= a
    return s, k


def squarefree_decompose(n: int) -> Tuple[int, int]:
    """Return ``(s, k)`` with ``n == s*s*k`` and ``k`` a product of distinct atoms.

    Atoms are small primes and large pairwise coprime non-squares; for every
    input that factors over the trial primes ``k`` is the squarefree part.

    >>> squarefree_decompose(72)
    (6, 2)
    """
    if n < 0:
        raise DomainError(f"cannot decompose negative integer {n}")
    if n == 0:
        return 0, 1
    s = k = 1
    for p in _PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                k *= p
    if n > 1:
        if n <= TRIAL_BOUND:
            k *= n
        else:
            ls, lk = _decompose_large(n)
            s, k = s * ls, k * lk
    return s, k


def _atoms_of(k: int) -> Tuple[int, ...]:
    """Atoms dividing a canonical radicand ``k``."""
    cached = _ATOM_CACHE.get(k)
    if cached is not None:
        return cached
    out = []
    rest = k
    for p in _PRIMES:
        if rest == 1 or p > rest:
            break
        if rest % p == 0:
            out.append(p)
            rest //= p
    with _LOCK:
        if rest > 1:
            if rest <= TRIAL_BOUND:
                out.append(rest)
                rest = 1
            for a in _LARGE_ATOMS:
                if rest % a == 0:
                    out.append(a)
                    rest //= a
        if rest != 1:
            raise DomainError(f"{k} is not a canonical radicand")
        _ATOM_CACHE[k] = tuple(out)
    return tuple(out)


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, TowerScalar):
        if not value.is_rational():
            raise DomainError(f"{value} is not rational")
        return value.rational_part()
    raise TypeError(f"cannot interpret {value!r} as a rational")


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def _q(value) -> mpq:
    q = as_rational(value)
    return mpq(q.numerator, q.denominator)


_Q0 = mpq(0)


def format_rational(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


Scalar = Union["TowerScalar", Fraction, int]


class TowerScalar:
    """Exact element of ``Q(sqrt(k1), sqrt(k2), ...)``.

    Instances are immutable and hashable.  Arithmetic with ``int`` and
    ``Fraction`` operands is supported on either side.

    >>> r2 = TowerScalar.sqrt(2)
    >>> (r2 + TowerScalar.sqrt(3)) ** 2
    TowerScalar('5 + 2*sqrt(6)')
    >>> (3 - 2 * r2).sign()
    1
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, value: Union[int, Fraction, str, "TowerScalar"] = 0):
        if isinstance(value, TowerScalar):
            self._terms = value._terms
        elif isinstance(value, str):
            self._terms = TowerScalar.parse(value)._terms
        else:
            q = as_rational(value)
            self._terms = {1: mpq(q.numerator, q.denominator)} if q else {}
        self._hash = None

    @classmethod
    def _from_terms(cls, terms: Dict[int, Fraction]) -> "TowerScalar":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[int, Union[int, Fraction]]]) -> "TowerScalar":
        """Build ``sum(c * sqrt(m))`` for arbitrary nonnegative integers ``m``.

        ``terms`` is a mapping ``m -> c`` or an iterable of ``(m, c)`` pairs.
        """
        if hasattr(terms, "items"):
            terms = terms.items()
        acc: Dict[int, mpq] = {}
        for m, c in terms:
            c = _q(c)
            if not c:
                continue
            s, k = squarefree_decompose(int(m))
            if s == 0:
                continue
            acc[k] = acc.get(k, _Q0) + c * s
        return cls._from_terms({k: v for k, v in acc.items() if v})

    @classmethod
    def sqrt(cls, r) -> "TowerScalar":
        return canonical_sqrt(as_rational(r))

    # -- inspection ---------------------------------------------------------

    def terms(self) -> Iterator[Tuple[int, Fraction]]:
        """Iterate ``(radicand, coefficient)`` in increasing radicand order."""
        for k in sorted(self._terms):
            c = self._terms[k]
            yield k, Fraction(int(c.numerator), int(c.denominator))

    def radicands(self) -> Tuple[int, ...]:
        return tuple(sorted(k for k in self._terms if k != 1))

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 1 in self._terms)

    def rational_part(self) -> Fraction:
        c = self._terms.get(1, _Q0)
        return Fraction(int(c.numerator), int(c.denominator))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "TowerScalar":
        if isinstance(other, TowerScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return TowerScalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return TowerScalar._from_terms(out)

    __radd__ = __add__

    def __neg__(self):
        return TowerScalar._from_terms({k: -c for k, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO_SCALAR
            other = _q(other)
            return TowerScalar._from_terms({k: c * other for k, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return tower_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE_SCALAR
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate_at(self, p: int) -> "TowerScalar":
        """Apply the field automorphism ``sqrt(p) -> -sqrt(p)`` for an atom ``p``."""
        return TowerScalar._from_terms(
            {k: (-c if k % p == 0 else c) for k, c in self._terms.items()}
        )

    def inverse(self) -> "TowerScalar":
        if not self._terms:
            raise ZeroDivisionError("inverse of zero tower scalar")
        if self.is_rational():
            return TowerScalar(1 / self._terms[1])
        # a * sigma_p(a) lies in the subfield without sqrt(p)
        p = min(_atoms_of(max(self._terms)))
        conj = self.conjugate_at(p)
        norm = self * conj
        return conj * norm.inverse()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of tower scalar by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, TowerScalar):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({1: _q(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_part())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sign(self) -> int:
        return tower_sign(self)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- numeric views ------------------------------------------------------

    def enclosure(self, bits: int) -> Tuple[Fraction, Fraction]:
        """Rational interval of width ``O(2**-bits)`` containing the value."""
        lo, hi = self._enclosure(bits)
        return Fraction(int(lo.numerator), int(lo.denominator)), Fraction(int(hi.numerator), int(hi.denominator))

    def _enclosure(self, bits: int) -> Tuple[mpq, mpq]:
        lo = hi = _Q0
        scale = 1 << bits
        for k, c in self._terms.items():
            if k == 1:
                lo += c
                hi += c
                continue
            r = math.isqrt(k * scale * scale)
            a = mpq(r, scale)
            b = mpq(r + 1, scale)
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def __float__(self) -> float:
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def to_decimal(self, digits: int = 12) -> str:
        """Approximate decimal rendering with ``digits`` significant digits."""
        if not self._terms:
            return "0"
        bits = 64
        while True:
            lo, hi = self.enclosure(bits)
            mid = (lo + hi) / 2
            if mid and (hi - lo) < abs(mid) * Fraction(1, 10 ** (digits + 2)):
                break
            if not mid and hi - lo < Fraction(1, 10 ** (digits + 2)):
                break
            bits *= 2
        return format(float(mid), f".{digits}g") if abs(mid) < 1e300 else str(mid)

    # -- text and JSON ------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in self.terms():
            neg = c < 0
            a = -c if neg else c
            if k == 1:
                body = format_rational(a)
            elif a == 1:
                body = f"sqrt({k})"
            else:
                body = f"{format_rational(a)}*sqrt({k})"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"TowerScalar({str(self)!r})"

    _TERM_RE = re.compile(
        r"""\s*([+-])?\s*
        (?:(\d+(?:\s*/\s*\d+)?)\s*(?:\*\s*sqrt\(\s*(\d+)\s*\))?
          |sqrt\(\s*(\d+)\s*\)(?:\s*\*\s*(\d+(?:\s*/\s*\d+)?))?)
        \s*""",
        re.VERBOSE,
    )

    @classmethod
    def parse(cls, text: str) -> "TowerScalar":
        """Parse the textual form produced by :meth:`__str__`.

        Accepts sums of terms ``c``, ``c*sqrt(m)``, ``sqrt(m)`` and
        ``sqrt(m)*c`` with rational ``c``; ``m`` need not be squarefree.
        """
        pos = 0
        text = text.strip()
        if not text:
            raise ValueError("empty scalar string")
        items = []
        first = True
        while pos < len(text):
            m = cls._TERM_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"malformed scalar {text!r} at offset {pos}")
            sgn, coef, rad, rad2, coef2 = m.groups()
            if sgn is None and not first:
                raise ValueError(f"malformed scalar {text!r} at offset {pos}")
            first = False
            if coef is not None:
                c = parse_rational(coef.replace(" ", ""))
                k = int(rad) if rad else 1
            else:
                c = parse_rational(coef2.replace(" ", "")) if coef2 else Fraction(1)
                k = int(rad2)
            if sgn == "-":
                c = -c
            items.append((k, c))
            pos = m.end()
        return cls.from_terms(items)

    def to_json(self) -> list:
        return [
            {"radicands": [] if k == 1 else sorted(_atoms_of(k)), "coefficient": format_rational(c)}
            for k, c in self.terms()
        ]

    @classmethod
    def from_json(cls, data) -> "TowerScalar":
        if isinstance(data, str):
            return cls.parse(data)
        if isinstance(data, (int,)):
            return cls(data)
        items = []
        for term in data:
            m = 1
            for r in term.get("radicands", []):
                r = int(r)
                if r <= 1:
                    raise ValueError(f"radicand must exceed 1, got {r}")
                m *= r
            items.append((m, parse_rational(str(term["coefficient"]))))
        return cls.from_terms(items)


ZERO_SCALAR = TowerScalar(0)
ONE_SCALAR = TowerScalar(1)


def canonical_sqrt(r) -> TowerScalar:
    """Nonnegative square root of a nonnegative rational.

    ``sqrt(a/b)`` is rewritten as ``sqrt(a*b)/b`` with square parts of ``a``
    and ``b`` pulled out separately.

    >>> canonical_sqrt(Fraction(8, 9))
    TowerScalar('2/3*sqrt(2)')
    """
    r = as_rational(r)
    if r < 0:
        raise DomainError(f"square root of negative rational {format_rational(r)}")
    if r == 0:
        return ZERO_SCALAR
    sa, ka = squarefree_decompose(r.numerator)
    sb, kb = squarefree_decompose(r.denominator)
    # coprime numerator and denominator share no atom
    return TowerScalar._from_terms({ka * kb: mpq(sa, sb * kb)})


def tower_mul(a: TowerScalar, b: TowerScalar) -> TowerScalar:
    """Exact product; ``sqrt(m)*sqrt(n) = g*sqrt(m*n/g**2)`` with ``g = gcd(m, n)``."""
    if not a._terms or not b._terms:
        return ZERO_SCALAR
    out: Dict[int, mpq] = {}
    for ka, ca in a._terms.items():
        for kb, cb in b._terms.items():
            if ka == 1:
                k, c = kb, ca * cb
            elif kb == 1:
                k, c = ka, ca * cb
            else:
                g = math.gcd(ka, kb)
                k = (ka // g) * (kb // g)
                c = ca * cb * g
            v = out.get(k)
            out[k] = c if v is None else v + c
    return TowerScalar._from_terms({k: v for k, v in out.items() if v})


def tower_sign(a: TowerScalar) -> int:
    """Exact sign by interval refinement; zero is detected from the canonical form."""
    if not a._terms:
        return ZERO
    if a.is_rational():
        return POSITIVE if a._terms[1] > 0 else NEGATIVE
    bits = 32
    while True:
        lo, hi = a._enclosure(bits)
        if lo > 0:
            return POSITIVE
        if hi < 0:
            return NEGATIVE
        bits *= 2
