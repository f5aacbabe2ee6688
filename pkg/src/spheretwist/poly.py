"""Sparse multivariate polynomials over tower scalars, and rational maps.

Polynomials are immutable dictionaries from exponent tuples to nonzero
:class:`~spheretwist.tower.TowerScalar` coefficients.  A
:class:`RationalMap` is a tuple of polynomial fractions sharing one variable
list, together with a tag naming the set on which the denominators are known
not to vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .tower import ONE_SCALAR, ZERO_SCALAR, TowerScalar

__all__ = [
    "Polynomial",
    "RationalMap",
    "OutsideDomainError",
    "poly_compose",
    "map_eval",
    "univariate_gcd",
    "reduce_mod_sphere",
    "NEG_INF",
]

Exponent = Tuple[int, ...]

NEG_INF = float("-inf")


class OutsideDomainError(ArithmeticError):
    """A denominator vanished at the evaluation point."""


def _scalar(c) -> TowerScalar:
    return c if isinstance(c, TowerScalar) else TowerScalar(c)


class Polynomial:
    """Immutable sparse polynomial in an ordered list of named variables."""

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Exponent, object]] = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Exponent, TowerScalar] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for variables {self.variables}")
            c = _scalar(c)
            if c:
                prev = clean.get(exp)
                c = c if prev is None else prev + c
                if c:
                    clean[exp] = c
                else:
                    del clean[exp]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Exponent, TowerScalar]) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.variables = variables
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "Polynomial":
        c = _scalar(c)
        n = len(variables)
        return cls._raw(tuple(variables), {(0,) * n: c} if c else {})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def one(cls, variables: Sequence[str]) -> "Polynomial":
        return cls.constant(variables, ONE_SCALAR)

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        i = variables.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls._raw(variables, {exp: ONE_SCALAR})

    @classmethod
    def linear(cls, variables: Sequence[str], coeffs: Sequence, const=0) -> "Polynomial":
        """``sum(coeffs[i] * var_i) + const``."""
        variables = tuple(variables)
        n = len(variables)
        terms: Dict[Exponent, TowerScalar] = {}
        for i, c in enumerate(coeffs):
            c = _scalar(c)
            if c:
                terms[tuple(1 if j == i else 0 for j in range(n))] = c
        const = _scalar(const)
        if const:
            terms[(0,) * n] = const
        return cls._raw(variables, terms)

    @classmethod
    def univariate(cls, name: str, coeffs: Sequence) -> "Polynomial":
        """From ascending coefficient list ``[c0, c1, ...]``."""
        return cls((name,), {(i,): c for i, c in enumerate(coeffs)})

    # -- inspection ---------------------------------------------------------

    def terms(self) -> List[Tuple[Exponent, TowerScalar]]:
        return sorted(self._terms.items())

    def coefficient(self, exp: Exponent) -> TowerScalar:
        return self._terms.get(tuple(exp), ZERO_SCALAR)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * len(self.variables)}

    def constant_term(self) -> TowerScalar:
        return self._terms.get((0,) * len(self.variables), ZERO_SCALAR)

    def degree(self):
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def degree_in(self, i: int) -> int:
        if not self._terms:
            return 0
        return max(e[i] for e in self._terms)

    def used_variables(self) -> Tuple[int, ...]:
        used = set()
        for e in self._terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(sorted(used))

    def leading(self) -> Tuple[Exponent, TowerScalar]:
        """Term with the lexicographically greatest exponent."""
        exp = max(self._terms)
        return exp, self._terms[exp]

    def coefficients_rational(self) -> bool:
        return all(c.is_rational() for c in self._terms.values())

    def __len__(self):
        return len(self._terms)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, TowerScalar)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = _scalar(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, TowerScalar)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: Dict[Exponent, TowerScalar] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = ca * cb
                prev = out.get(e)
                out[e] = v if prev is None else prev + v
        return Polynomial._raw(self.variables, {e: v for e, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Polynomial.one(self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction, TowerScalar)):
            return self == Polynomial.constant(self.variables, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def shift_down(self, exp: Exponent) -> "Polynomial":
        """Divide by the monomial ``exp`` (must divide every term)."""
        return Polynomial._raw(
            self.variables,
            {tuple(a - b for a, b in zip(e, exp)): c for e, c in self._terms.items()},
        )

    def monomial_content(self) -> Exponent:
        if not self._terms:
            return (0,) * len(self.variables)
        return tuple(min(col) for col in zip(*self._terms))

    def rational_content(self) -> Fraction:
        """Positive rational ``g`` such that ``self / g`` has coprime integer coefficients.

        Only meaningful when every coefficient is rational.
        """
        nums = [c.rational_part() for c in self._terms.values()]
        if not nums:
            return Fraction(1)
        g = reduce(math.gcd, (q.numerator for q in nums))
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (q.denominator for q in nums))
        return Fraction(abs(g), lcm)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, *point) -> TowerScalar:
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != len(self.variables):
            raise ValueError(f"expected {len(self.variables)} values, got {len(point)}")
        if not self._terms:
            return ZERO_SCALAR
        vals = [_scalar(v) for v in point]
        if len(vals) == 1:
            return self._horner(vals[0])
        powers: List[Dict[int, TowerScalar]] = [{0: ONE_SCALAR, 1: v} for v in vals]

        def power(i: int, k: int) -> TowerScalar:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k // 2) * power(i, k - k // 2)
            return cache[k]

        total = ZERO_SCALAR
        for e, c in self._terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def _horner(self, x: TowerScalar) -> TowerScalar:
        deg = self.degree_in(0)
        acc = ZERO_SCALAR
        for k in range(deg, -1, -1):
            acc = acc * x + self._terms.get((k,), ZERO_SCALAR)
        return acc

    def substitute(self, values: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by the polynomial ``values[i]``."""
        if len(values) != len(self.variables):
            raise ValueError("substitution arity mismatch")
        target_vars = values[0].variables if values else ()
        result = Polynomial.zero(target_vars)
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in cache:
                if k == 0:
                    cache[key] = Polynomial.one(target_vars)
                elif k == 1:
                    cache[key] = values[i]
                else:
                    cache[key] = power(i, k // 2) * power(i, k - k // 2)
            return cache[key]

        for e, c in self._terms.items():
            term = Polynomial.constant(target_vars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    # -- univariate division ------------------------------------------------

    def divmod_univariate(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if len(self.variables) != 1:
            raise ValueError("univariate division needs a single variable")
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        v = self.variables
        dd = other.degree_in(0)
        lead_inv = other.coefficient((dd,)).inverse()
        rem = dict(self._terms)
        quot: Dict[Exponent, TowerScalar] = {}
        while rem:
            rd = max(e[0] for e in rem)
            if rd < dd:
                break
            c = rem[(rd,)] * lead_inv
            quot[(rd - dd,)] = c
            for (k,), oc in other._terms.items():
                e = (k + rd - dd,)
                val = rem.get(e, ZERO_SCALAR) - c * oc
                if val:
                    rem[e] = val
                else:
                    rem.pop(e, None)
        return Polynomial._raw(v, quot), Polynomial._raw(v, rem)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        _, lc = self.leading()
        return self.scale(lc.inverse())

    # -- text and JSON ------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k
            )
            cs = str(c)
            if not c.is_rational() and len(list(c.terms())) > 1:
                cs = f"({cs})"
            if mono:
                parts.append(mono if cs == "1" else f"{cs}*{mono}")
            else:
                parts.append(cs)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self.variables}, {str(self)!r})"

    def to_json(self) -> list:
        return [{"exponents": list(e), "coefficient": c.to_json()} for e, c in self.terms()]

    @classmethod
    def from_json(cls, variables: Sequence[str], data: Iterable[Mapping]) -> "Polynomial":
        return cls(variables, {tuple(t["exponents"]): TowerScalar.from_json(t["coefficient"]) for t in data})


def univariate_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd of two univariate polynomials over the tower field."""
    while not b.is_zero():
        _, r = a.divmod_univariate(b)
        a, b = b, r
    return a.monic() if not a.is_zero() else a


def reduce_mod_sphere(p: Polynomial, z_index: int = 2) -> Polynomial:
    """Normal form modulo ``x^2 + y^2 + z^2 - 1`` (rewrites ``z^2`` as ``1 - x^2 - y^2``)."""
    n = len(p.variables)
    others = [i for i in range(n) if i != z_index]
    if len(others) != 2:
        raise ValueError("sphere reduction expects three variables")
    i, j = others
    out: Dict[Exponent, TowerScalar] = {}

    def add(e, c):
        v = out.get(e)
        v = c if v is None else v + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)

    # (1 - x^2 - y^2)^q expanded by the trinomial theorem
    for e, c in p._terms.items():
        q, r = divmod(e[z_index], 2)
        for a in range(q + 1):
            for b in range(q - a + 1):
                coeff = math.comb(q, a) * math.comb(q - a, b) * (-1) ** (a + b)
                ne = list(e)
                ne[z_index] = r
                ne[i] += 2 * a
                ne[j] += 2 * b
                add(tuple(ne), c * coeff)
    return Polynomial._raw(p.variables, out)


@dataclass(frozen=True)
class RationalMap:
    """Tuple of polynomial fractions ``num_i / den_i`` in shared variables."""

    variables: Tuple[str, ...]
    components: Tuple[Tuple[Polynomial, Polynomial], ...]
    domain_tag: str = "unspecified"

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "components", tuple((n, d) for n, d in self.components))
        for num, den in self.components:
            if num.variables != self.variables or den.variables != self.variables:
                raise ValueError("component variables differ from map variables")
            if den.is_zero():
                raise ValueError("denominator is the zero polynomial")

    @classmethod
    def identity(cls, variables: Sequence[str], domain_tag: str = "everywhere") -> "RationalMap":
        one = Polynomial.one(variables)
        return cls(
            tuple(variables),
            tuple((Polynomial.var(variables, v), one) for v in variables),
            domain_tag,
        )

    @classmethod
    def polynomial(cls, components: Sequence[Polynomial], domain_tag: str = "everywhere") -> "RationalMap":
        variables = components[0].variables
        one = Polynomial.one(variables)
        return cls(variables, tuple((p, one) for p in components), domain_tag)

    @property
    def arity(self) -> int:
        return len(self.variables)

    def __len__(self):
        return len(self.components)

    def __call__(self, point: Sequence) -> Tuple[TowerScalar, ...]:
        return map_eval(self, point)

    def degrees(self) -> List[Tuple[int, int]]:
        return [(int(max(n.degree(), 0)), int(d.degree())) for n, d in self.components]

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "domain_tag": self.domain_tag,
            "components": [
                {"numerator": n.to_json(), "denominator": d.to_json()} for n, d in self.components
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RationalMap":
        variables = tuple(data["variables"])
        comps = tuple(
            (Polynomial.from_json(variables, c["numerator"]), Polynomial.from_json(variables, c["denominator"]))
            for c in data["components"]
        )
        return cls(variables, comps, data.get("domain_tag", "unspecified"))


def map_eval(m: RationalMap, point: Sequence) -> Tuple[TowerScalar, ...]:
    """Exact values ``num_i(point) / den_i(point)``."""
    point = tuple(_scalar(v) for v in point)
    out = []
    den_cache: Dict[Polynomial, TowerScalar] = {}
    for num, den in m.components:
        dv = den_cache.get(den)
        if dv is None:
            dv = den_cache[den] = den(point)
        if not dv:
            raise OutsideDomainError(
                f"denominator {den} vanishes at ({', '.join(map(str, point))})"
            )
        out.append(num(point) / dv)
    return tuple(out)


def _simplify(num: Polynomial, den: Polynomial, full_gcd: bool) -> Tuple[Polynomial, Polynomial]:
    if num.is_zero():
        return num, Polynomial.one(den.variables)
    mono = tuple(min(a, b) for a, b in zip(num.monomial_content(), den.monomial_content()))
    if any(mono):
        num, den = num.shift_down(mono), den.shift_down(mono)
    used = set(num.used_variables()) | set(den.used_variables())
    if len(used) == 1 and not den.is_constant():
        (i,) = used
        num, den = _univariate_cancel(num, den, i)
    elif full_gcd and len(used) > 1 and num.coefficients_rational() and den.coefficients_rational():
        num, den = _sympy_cancel(num, den)
    if num.coefficients_rational() and den.coefficients_rational():
        cd = den.rational_content()
        _, lc = den.leading()
        sgn = 1 if lc.sign() > 0 else -1
        factor = TowerScalar(sgn / cd)
        num, den = num.scale(factor), den.scale(factor)
    else:
        _, lc = den.leading()
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _project(p: Polynomial, i: int) -> Polynomial:
    return Polynomial((p.variables[i],), {(e[i],): c for e, c in p._terms.items()})


def _embed(p: Polynomial, variables: Tuple[str, ...], i: int) -> Polynomial:
    n = len(variables)
    return Polynomial._raw(
        variables, {tuple(e[0] if j == i else 0 for j in range(n)): c for e, c in p._terms.items()}
    )


def _univariate_cancel(num: Polynomial, den: Polynomial, i: int) -> Tuple[Polynomial, Polynomial]:
    un, ud = _project(num, i), _project(den, i)
    g = univariate_gcd(un, ud)
    if g.degree() <= 0:
        return num, den
    qn, _ = un.divmod_univariate(g)
    qd, _ = ud.divmod_univariate(g)
    return _embed(qn, num.variables, i), _embed(qd, den.variables, i)


def _sympy_cancel(num: Polynomial, den: Polynomial) -> Tuple[Polynomial, Polynomial]:
    import sympy

    gens = sympy.symbols(f"v0:{len(num.variables)}")

    def to_sympy(p: Polynomial):
        return sympy.Poly.from_dict(
            {e: sympy.Rational(c.rational_part().numerator, c.rational_part().denominator) for e, c in p._terms.items()},
            *gens,
            domain="QQ",
        )

    sn, sd = to_sympy(num), to_sympy(den)
    g = sympy.gcd(sn, sd)
    if g.total_degree() <= 0:
        return num, den

    def back(p) -> Polynomial:
        return Polynomial(num.variables, {e: Fraction(int(c.p), int(c.q)) for e, c in p.as_dict().items()})

    return back(sympy.quo(sn, g)), back(sympy.quo(sd, g))


def poly_compose(outer: RationalMap, inner: RationalMap, full_gcd: bool = False, domain_tag: Optional[str] = None) -> RationalMap:
    """The map ``outer o inner`` as polynomial fractions in ``inner``'s variables.

    Components of ``inner`` sharing a denominator are grouped, so each
    distinct denominator ``D`` is raised only to the largest combined degree
    it needs.  The result is reduced by monomial and rational content and,
    when only one variable is involved, by a univariate gcd.
    """
    if outer.arity != len(inner):
        raise ValueError(f"outer takes {outer.arity} arguments, inner yields {len(inner)}")
    variables = inner.variables
    nums = [n for n, _ in inner.components]
    dens = [d for _, d in inner.components]
    groups: Dict[Polynomial, List[int]] = {}
    for i, d in enumerate(dens):
        groups.setdefault(d, []).append(i)
    group_list = list(groups.items())

    pow_cache: Dict[Tuple[str, int, int], Polynomial] = {}

    def power(kind: str, idx: int, k: int) -> Polynomial:
        key = (kind, idx, k)
        if key not in pow_cache:
            base = nums[idx] if kind == "n" else group_list[idx][0]
            if k == 0:
                pow_cache[key] = Polynomial.one(variables)
            elif k == 1:
                pow_cache[key] = base
            else:
                pow_cache[key] = power(kind, idx, k // 2) * power(kind, idx, k - k // 2)
        return pow_cache[key]

    def homogenized(p: Polynomial, budget: Sequence[int]) -> Polynomial:
        total = Polynomial.zero(variables)
        for e, c in p._terms.items():
            term = Polynomial.constant(variables, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power("n", i, k)
            for g, (_, members) in enumerate(group_list):
                deficit = budget[g] - sum(e[i] for i in members)
                if deficit:
                    term = term * power("d", g, deficit)
            total = total + term
        return total

    comps = []
    for pn, pd in outer.components:
        budget = []
        for _, members in group_list:
            budget.append(
                max(sum(e[i] for i in members) for e in list(pn._terms) + list(pd._terms))
                if (pn._terms or pd._terms)
                else 0
            )
        num = homogenized(pn, budget)
        den = homogenized(pd, budget)
        if den.is_zero():
            raise OutsideDomainError("composite denominator is identically zero")
        comps.append(_simplify(num, den, full_gcd))
    tag = domain_tag or inner.domain_tag
    return RationalMap(variables, tuple(comps), tag)
