"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are exponent tuples, coefficients are ``fractions.Fraction``.  All
operations are pure; a ``Polynomial`` is never mutated after construction.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # exponent tuple, one entry per variable

ZERO = Fraction(0)
ONE = Fraction(1)


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def grlex_key(m: Monomial):
    """Sort key: graded lexicographic, ascending."""
    return (mono_degree(m), m)


def grevlex_key(m: Monomial):
    """Sort key: graded reverse lexicographic, ascending."""
    return (mono_degree(m), tuple(-e for e in reversed(m)))


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, d: int) -> tuple:
    """All monomials in ``nvars`` variables of total degree exactly ``d``,
    in ascending grevlex order.  Length is C(nvars+d-1, d)."""
    if nvars < 1:
        raise ValueError("need at least one variable")
    if d < 0:
        return ()
    if nvars == 1:
        return ((d,),)
    out = []
    for e in range(d + 1):
        for rest in monomials_of_degree(nvars - 1, d - e):
            out.append((e,) + rest)
    out.sort(key=grevlex_key)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_below(nvars: int, order: int) -> tuple:
    """All monomials of total degree < order, ascending grevlex.
    Length is C(nvars+order-1, nvars)."""
    out = []
    for d in range(order):
        out.extend(monomials_of_degree(nvars, d))
    return tuple(out)


@lru_cache(maxsize=None)
def mono_index_map(nvars: int, order: int) -> dict:
    """Monomial -> rank within monomials_below(nvars, order)."""
    return {m: i for i, m in enumerate(monomials_below(nvars, order))}


def count_monomials_below(nvars: int, order: int) -> int:
    return comb(nvars + order - 1, nvars)


class Polynomial:
    """A polynomial over Q in a fixed number of variables.

    ``terms`` maps exponent tuples to nonzero Fractions.  Equality is
    term-by-term; zero coefficients are never stored.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    if len(m) != nvars:
                        raise ValueError(f"monomial {m} has wrong arity for {nvars} variables")
                    clean[tuple(m)] = c
        self.terms = clean

    # ---- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): ONE})

    @classmethod
    def monomial(cls, nvars: int, m: Monomial, c=1) -> "Polynomial":
        return cls(nvars, {tuple(m): Fraction(c)})

    # ---- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((mono_degree(m) for m in self.terms), default=-1)

    def low_degree(self) -> int:
        """Degree of the lowest-order term; -1 for zero."""
        return min((mono_degree(m) for m in self.terms), default=-1)

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), ZERO)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, ZERO)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # ---- arithmetic ---------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, ZERO) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = terms
        return out

    def __neg__(self) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = terms.get(m, ZERO) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = terms
        return out

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = {m: c * v for m, v in self.terms.items()}
        return out

    def mul_monomial(self, m: Monomial, c=1) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = {mono_mul(t, m): c * v for t, v in self.terms.items()}
        return out

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # ---- calculus / substitution -------------------------------------
    def diff(self, var: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``var``."""
        if not 0 <= var < self.nvars:
            raise ValueError(f"variable index {var} out of range")
        terms = {}
        for m, c in self.terms.items():
            e = m[var]
            if e:
                m2 = m[:var] + (e - 1,) + m[var + 1 :]
                terms[m2] = terms.get(m2, ZERO) + c * e
        return Polynomial(self.nvars, terms)

    def truncate(self, order: int | None) -> "Polynomial":
        """Drop all terms of total degree >= order.  ``None`` is a no-op."""
        if order is None:
            return self
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = {m: c for m, c in self.terms.items() if mono_degree(m) < order}
        return out

    def substitute(self, values: Sequence["Polynomial"], order: int | None = None) -> "Polynomial":
        """Compose: substitute ``values[i]`` for variable i.

        All substituted polynomials must share a variable count; the result
        lives in that ring.  ``order`` truncates the result (and all
        intermediates) at the given jet order.
        """
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} substitution values, got {len(values)}")
        if self.nvars == 0:
            raise ValueError("cannot substitute into a 0-variable polynomial")
        tvars = values[0].nvars
        for v in values:
            if v.nvars != tvars:
                raise ValueError("substitution values disagree on variable count")
        # cache powers per variable as needed
        powers: list[dict] = [{0: Polynomial.constant(tvars, 1)} for _ in range(self.nvars)]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            if e not in cache:
                cache[e] = (power(i, e - 1) * values[i]).truncate(order)
            return cache[e]

        result = Polynomial.zero(tvars)
        for m, c in self.terms.items():
            term = Polynomial.constant(tvars, c)
            for i, e in enumerate(m):
                if e:
                    term = (term * power(i, e)).truncate(order)
            result = result + term
        return result.truncate(order)

    # ---- rendering ----------------------------------------------------
    def render(self, names: Sequence[str]) -> str:
        """Canonical text form: terms in descending graded-lex order,
        coefficients as num/den with '/1' suppressed."""
        if len(names) != self.nvars:
            raise ValueError("wrong number of variable names")
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[m]
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            body = "*".join(factors)
            mag = abs(c)
            coeff = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if body and mag == 1:
                piece = body
            elif body:
                piece = f"{coeff}*{body}"
            else:
                piece = coeff
            parts.append(("- " if c < 0 else "+ ") + piece)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.render([f'x{i}' for i in range(self.nvars)])})"


def poly_vector_zero(rank: int, nvars: int) -> tuple:
    return tuple(Polynomial.zero(nvars) for _ in range(rank))


def vec_add(a: Iterable[Polynomial], b: Iterable[Polynomial]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(a: Iterable[Polynomial], c) -> tuple:
    return tuple(x.scale(c) for x in a)


def vec_truncate(a: Iterable[Polynomial], order: int | None) -> tuple:
    return tuple(x.truncate(order) for x in a)
