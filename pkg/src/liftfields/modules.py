"""Submodules of free modules over the polynomial ring.

Two layers live here:

* symbolic: Groebner bases of submodules of R^r (position-over-term order),
  normal forms, and syzygy computation via the augmented-module trick;
* jet-level: exact linear algebra on truncated module elements (spans of
  monomial multiples, quotient class maps, ideal-power filtrations).

The jet layer is where almost all invariants are actually computed; the
symbolic layer drives the unfolding-intersection pipeline.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import QuotientModel, SparseSpan
from .poly import (
    Monomial,
    Polynomial,
    grevlex_key,
    mono_degree,
    mono_div,
    mono_divides,
    mono_index_map,
    mono_lcm,
    mono_mul,
    monomials_below,
    monomials_of_degree,
)


# ---------------------------------------------------------------------------
# symbolic layer: module elements, Groebner bases, syzygies
# ---------------------------------------------------------------------------

class ModElement:
    """An element of the free module R^rank over the polynomial ring."""

    __slots__ = ("comps",)

    def __init__(self, comps: Sequence[Polynomial]):
        self.comps = tuple(comps)
        if not self.comps:
            raise ValueError("module element needs at least one component")
        nv = self.comps[0].nvars
        for c in self.comps:
            if c.nvars != nv:
                raise ValueError("components disagree on variable count")

    @property
    def rank(self) -> int:
        return len(self.comps)

    @property
    def nvars(self) -> int:
        return self.comps[0].nvars

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other):
        return isinstance(other, ModElement) and self.comps == other.comps

    def __add__(self, other: "ModElement") -> "ModElement":
        return ModElement([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "ModElement") -> "ModElement":
        return ModElement([a - b for a, b in zip(self.comps, other.comps)])

    def scale(self, c) -> "ModElement":
        return ModElement([a.scale(c) for a in self.comps])

    def mul_monomial(self, m: Monomial, c=1) -> "ModElement":
        return ModElement([a.mul_monomial(m, c) for a in self.comps])

    def terms(self):
        for pos, comp in enumerate(self.comps):
            for m, c in comp.terms.items():
                yield (pos, m), c

    def __repr__(self):
        return f"ModElement({list(self.comps)!r})"


def _term_key(term):
    """Position-over-term order: lower positions dominate, grevlex inside."""
    pos, m = term
    return (-pos,) + grevlex_key(m)


def _lead(v: ModElement):
    """(term, coefficient) of the leading term, or None for zero."""
    best = None
    for term, c in v.terms():
        if best is None or _term_key(term) > _term_key(best[0]):
            best = (term, c)
    return best


def _reduce_once(v: ModElement, basis: Sequence[ModElement]):
    """One top-reduction step against the basis; None if no reducer applies."""
    lv = _lead(v)
    if lv is None:
        return None
    (pos, m), c = lv
    for b in basis:
        (bpos, bm), bc = _lead(b)
        if bpos == pos and mono_divides(bm, m):
            return v - b.mul_monomial(mono_div(m, bm), c / bc)
    return None


def normal_form(v: ModElement, basis: Sequence[ModElement]) -> ModElement:
    """Full reduction of v modulo the basis (every term reduced)."""
    remainder = ModElement([Polynomial.zero(v.nvars)] * v.rank)
    while not v.is_zero():
        step = _reduce_once(v, basis)
        if step is not None:
            v = step
            continue
        (pos, m), c = _lead(v)
        lead_piece = [Polynomial.zero(v.nvars)] * v.rank
        lead_piece[pos] = Polynomial.monomial(v.nvars, m, c)
        lead_piece = ModElement(lead_piece)
        remainder = remainder + lead_piece
        v = v - lead_piece
    return remainder


def groebner_basis(gens: Sequence[ModElement]) -> list[ModElement]:
    """Buchberger's algorithm with the position-over-term order.

    S-pairs are formed only between elements whose leading terms share a
    position; termination is guaranteed by Dickson's lemma.
    """
    basis = [g for g in gens if not g.is_zero()]
    if not basis:
        return []
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        # normal selection: smallest lcm degree first
        pairs.sort(
            key=lambda ij: mono_degree(
                mono_lcm(_lead(basis[ij[0]])[0][1], _lead(basis[ij[1]])[0][1])
            )
            if _lead(basis[ij[0]])[0][0] == _lead(basis[ij[1]])[0][0]
            else -1
        )
        i, j = pairs.pop(0)
        (pi, mi), ci = _lead(basis[i])
        (pj, mj), cj = _lead(basis[j])
        if pi != pj:
            continue
        lcm = mono_lcm(mi, mj)
        s = basis[i].mul_monomial(mono_div(lcm, mi), Fraction(1, 1) / ci) - basis[
            j
        ].mul_monomial(mono_div(lcm, mj), Fraction(1, 1) / cj)
        r = normal_form(s, basis)
        if not r.is_zero():
            basis.append(r)
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return basis


def module_membership(v: ModElement, basis: Sequence[ModElement]) -> bool:
    """Exact membership in the submodule generated by a Groebner basis."""
    return normal_form(v, basis).is_zero()


def syzygy_basis(gens: Sequence[Polynomial]) -> list[tuple[Polynomial, ...]]:
    """Generators of the syzygy module {(a_1..a_m) : sum a_i g_i = 0}.

    Augmented-module trick: compute a Groebner basis of the elements
    (g_i, e_i) in R^{1+m} under an order where position 0 dominates; basis
    elements with zero first component are exactly the syzygies.
    """
    m = len(gens)
    if m == 0:
        return []
    nv = gens[0].nvars
    aug = []
    for i, g in enumerate(gens):
        comps = [g] + [Polynomial.zero(nv)] * m
        comps[1 + i] = Polynomial.constant(nv, 1)
        aug.append(ModElement(comps))
    gb = groebner_basis(aug)
    out = []
    for v in gb:
        if v.comps[0].is_zero():
            out.append(v.comps[1:])
    return out


# ---------------------------------------------------------------------------
# jet layer: truncated spans of vectors of polynomials
# ---------------------------------------------------------------------------

def vector_ambient_index(rank: int, nvars: int, order: int):
    """Column index for (position, monomial) pairs: monomial-major, so the
    smallest columns carry the lowest jet degrees."""
    idx = mono_index_map(nvars, order)

    def col(pos: int, m: Monomial) -> int:
        return idx[m] * rank + pos

    return col


def vector_to_row(comps: Sequence[Polynomial], rank: int, order: int) -> dict:
    """Sparse coefficient row of a truncated vector of polynomials."""
    nv = comps[0].nvars
    col = vector_ambient_index(rank, nv, order)
    row = {}
    for pos, c in enumerate(comps):
        for m, v in c.terms.items():
            if mono_degree(m) < order:
                row[col(pos, m)] = v
    return row


def jet_span(vectors: Iterable[Sequence[Polynomial]], rank: int, order: int) -> SparseSpan:
    """Echelon span of the truncated coefficient vectors."""
    span = SparseSpan()
    for v in vectors:
        span.add(vector_to_row(v, rank, order))
    return span


def module_jet_span(
    gens: Iterable[Sequence[Polynomial]], rank: int, nvars: int, order: int, min_mult_degree: int = 0
) -> SparseSpan:
    """Jet span of all monomial multiples x^a * g (deg a >= min_mult_degree)
    of the generators, truncated at the given order."""
    span = SparseSpan()
    for g in gens:
        low = min((c.low_degree() for c in g if not c.is_zero()), default=-1)
        if low < 0:
            continue
        for d in range(min_mult_degree, max(order - low, min_mult_degree)):
            for m in monomials_of_degree(nvars, d):
                mult = [c.mul_monomial(m).truncate(order) for c in g]
                span.add(vector_to_row(mult, rank, order))
    return span


def span_sum(a: SparseSpan, b: SparseSpan) -> SparseSpan:
    out = a.copy()
    for row in b.basis_rows():
        out.add(dict(row))
    return out


def span_intersection(a: SparseSpan, b: SparseSpan, ambient_dim: int) -> SparseSpan:
    """Zassenhaus: echelonize rows (x|x) for x in a and (y|0) for y in b;
    rows pivoted in the right half have zero left half and their right
    halves span the intersection."""
    work = SparseSpan()
    for row in a.basis_rows():
        double = dict(row)
        double.update({k + ambient_dim: v for k, v in row.items()})
        work.add(double)
    for row in b.basis_rows():
        work.add(dict(row))
    out = SparseSpan()
    for pivot, row in work.rows.items():
        if pivot >= ambient_dim:
            out.add({k - ambient_dim: v for k, v in row.items()})
    return out


def span_contains(span: SparseSpan, comps: Sequence[Polynomial], rank: int, order: int) -> bool:
    return span.contains(vector_to_row(comps, rank, order))


# ---------------------------------------------------------------------------
# scalar ideal filtrations and quotient class maps
# ---------------------------------------------------------------------------

def poly_to_scalar_row(g: Polynomial, order: int) -> dict:
    idx = mono_index_map(g.nvars, order)
    return {idx[m]: c for m, c in g.terms.items() if mono_degree(m) < order}


def scalar_row_to_poly(row: dict, nvars: int, order: int) -> Polynomial:
    monos = monomials_below(nvars, order)
    return Polynomial(nvars, {monos[k]: Fraction(v) for k, v in row.items()})


def scalar_multiples_span(gens: Sequence[Polynomial], order: int) -> SparseSpan:
    """Jet span of the ideal (gens): all x^a * g truncated at order."""
    span = SparseSpan()
    if not gens:
        return span
    nv = gens[0].nvars
    for g in gens:
        low = g.low_degree()
        if low < 0:
            continue
        for d in range(max(order - low, 0)):
            for m in monomials_of_degree(nv, d):
                span.add(poly_to_scalar_row(g.mul_monomial(m).truncate(order), order))
    return span


class IdealPowerTower:
    """Jet spans of the powers I^k of a finitely generated ideal.

    F(1) is the span of all monomial multiples of the generators; F(k+1) is
    generated from a basis of F(k) by multiplying with the generators, which
    keeps the generator count proportional to dim F(k).  F(0) is the span of
    all monomials (the whole ring).

    When the Nakayama exponent ell (m^ell contained in I) is known, every
    monomial of degree >= k*ell lies in I^k, so those coordinates are seeded
    as pivots and generator multiples are truncated at degree k*ell.  This
    collapses the work to the low-degree slice where the filtration is
    nontrivial.
    """

    def __init__(self, gens: Sequence[Polynomial], order: int, ell: int | None = None):
        self.gens = [g for g in gens if not g.is_zero()]
        self.order = order
        self.ell = ell
        self.nvars = gens[0].nvars
        self._spans: dict[int, SparseSpan] = {}

    def _cover(self, k: int) -> int:
        if self.ell is None:
            return self.order
        return min(self.order, k * self.ell)

    def _seed(self, span: SparseSpan, cover: int):
        if cover >= self.order:
            return
        for r, m in enumerate(monomials_below(self.nvars, self.order)):
            if mono_degree(m) >= cover:
                span.add_pure_pivot(r)

    def span(self, k: int) -> SparseSpan:
        if k in self._spans:
            return self._spans[k]
        if k == 0:
            full = SparseSpan()
            for i in range(len(monomials_below(self.nvars, self.order))):
                full.add_pure_pivot(i)
            self._spans[0] = full
            return full
        cover = self._cover(k)
        span = SparseSpan()
        self._seed(span, cover)
        if k == 1:
            for g in self.gens:
                low = g.low_degree()
                for d in range(max(cover - low, 0)):
                    for m in monomials_of_degree(self.nvars, d):
                        span.add(
                            poly_to_scalar_row(g.mul_monomial(m).truncate(cover), self.order)
                        )
        else:
            prev = self.span(k - 1)
            basis = [
                scalar_row_to_poly(r, self.nvars, self.order) for r in prev.basis_rows()
            ]
            for g in self.gens:
                glow = g.low_degree()
                for b in basis:
                    if b.low_degree() + glow >= cover:
                        continue
                    span.add(poly_to_scalar_row((g * b).truncate(cover), self.order))
        self._spans[k] = span
        return span

    def power_products(self, k: int) -> list[Polynomial]:
        """A finite generator list of I^k itself (k-fold products)."""
        if k == 0:
            return [Polynomial.constant(self.nvars, 1)]
        out = [Polynomial.constant(self.nvars, 1)]
        for _ in range(k):
            out = [(a * g).truncate(None) for a in out for g in self.gens]
        # dedupe
        seen, uniq = set(), []
        for p in out:
            if p in seen or p.is_zero():
                continue
            seen.add(p)
            uniq.append(p)
        return uniq


class ScalarClassMap:
    """Coordinates on the quotient R/(span) of the truncated polynomial ring.

    The quotient basis is the set of non-pivot monomials (ascending degree);
    reduce() maps a polynomial to its exact coordinate vector.
    """

    def __init__(self, span: SparseSpan, nvars: int, order: int):
        self.nvars = nvars
        self.order = order
        self.monos = monomials_below(nvars, order)
        self.index = mono_index_map(nvars, order)
        pivots = set(span.rows)
        self.quotient_ranks = [i for i in range(len(self.monos)) if i not in pivots]
        self.rank_to_q = {r: q for q, r in enumerate(self.quotient_ranks)}
        self.dim = len(self.quotient_ranks)
        self._classes = self._build_classes(span)

    def _build_classes(self, span: SparseSpan) -> dict:
        """Fully reduce each pivot row so it expresses its pivot monomial in
        quotient coordinates; back-substitution in descending pivot order."""
        classes: dict[int, dict[int, Fraction]] = {}
        for pivot in sorted(span.rows, reverse=True):
            row = span.rows[pivot]
            lead = Fraction(row[pivot])
            acc: dict[int, Fraction] = {}
            for col, v in row.items():
                if col == pivot:
                    continue
                coef = -Fraction(v) / lead
                if col in self.rank_to_q:
                    acc[self.rank_to_q[col]] = acc.get(self.rank_to_q[col], Fraction(0)) + coef
                else:
                    for q, w in classes[col].items():
                        acc[q] = acc.get(q, Fraction(0)) + coef * w
            classes[pivot] = {q: w for q, w in acc.items() if w}
        return classes

    def reduce(self, g: Polynomial) -> dict[int, Fraction]:
        """Quotient coordinates {basis index: coefficient} of [g]."""
        out: dict[int, Fraction] = {}
        for m, c in g.terms.items():
            if mono_degree(m) >= self.order:
                continue
            r = self.index[m]
            if r in self.rank_to_q:
                q = self.rank_to_q[r]
                out[q] = out.get(q, Fraction(0)) + c
            else:
                for q, w in self._classes[r].items():
                    out[q] = out.get(q, Fraction(0)) + c * w
        return {q: v for q, v in out.items() if v}

    def quotient_monomials(self) -> list[Monomial]:
        return [self.monos[r] for r in self.quotient_ranks]
