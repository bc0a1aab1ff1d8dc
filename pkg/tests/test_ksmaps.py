"""Level-by-level matrix models: first-surjective and last-injective levels,
stability classification, and minimal generator counts."""

from math import comb

import pytest

from liftfields import (
    HypothesisError,
    classify_stable,
    invariants,
    ks_matrix,
    locate_i1_i2,
    min_generators,
    reduce_to_core,
)
from liftfields import catalog

from conftest import germ


def _core(doc):
    f = doc.to_multigerm()
    return reduce_to_core(f) if f.n > f.p else f


# ---------------------------------------------------------------------------
# frozen level data
# ---------------------------------------------------------------------------

FROZEN_LEVELS = {
    "morin-2": (0, 0),
    "morin-3": (0, 0),
    "whitney-psi2": (0, 0),
    "whitney-psi3": (0, 0),
    "phi-3": (0, 0),
    "phi-63": (0, 0),
    "multistable": (0, 0),
    "e0": (0, 0),
    "curve-457": (1, 1),
    "cusp-pair": (1, 1),
    "trigerm": (1, 1),
    "rieger-36": (1, 1),
    "rieger-ruas": (1, 1),
    "embedding": (0, "-infinity"),
    "tangent-fold-1": (1, 0),
    "fold-line": ("infinity up to cap", 0),
    "sfold-1-plus": ("infinity up to cap", "-infinity"),
}


@pytest.mark.parametrize("name,want", sorted(FROZEN_LEVELS.items()))
def test_levels_frozen(name, want):
    rep = locate_i1_i2(_core(catalog.load(name)))
    assert (rep.i1, rep.i2) == want


def test_levels_match_catalog_expectations(catalog_docs):
    for name, doc in catalog_docs.items():
        want_i1, want_i2 = catalog.expected_i1(doc), catalog.expected_i2(doc)
        if want_i1 is None and want_i2 is None:
            continue
        rep = locate_i1_i2(_core(doc))
        if want_i1 is not None:
            assert rep.i1 == want_i1, name
        if want_i2 is not None:
            assert rep.i2 == want_i2, name


# ---------------------------------------------------------------------------
# structural properties of the level scan
# ---------------------------------------------------------------------------

def test_surjectivity_upward_injectivity_downward(catalog_docs):
    for name, doc in catalog_docs.items():
        rep = locate_i1_i2(_core(doc), cap=4, full_scan=True)
        surj = [rec.surjective for rec in rep.levels]
        inj = [rec.injective for rec in rep.levels]
        for a, b in zip(surj, surj[1:]):
            assert (not a) or b, f"{name}: surjectivity not upward-closed"
        for a, b in zip(inj, inj[1:]):
            assert (not b) or a, f"{name}: injectivity not downward-closed"


def test_last_injective_not_above_first_surjective(catalog_docs):
    for name, doc in catalog_docs.items():
        rep = locate_i1_i2(_core(doc))
        if isinstance(rep.i1, int) and isinstance(rep.i2, int):
            assert rep.i2 <= rep.i1, name


def test_level_pattern(catalog_docs):
    # injective exactly up to the last injective level; surjective exactly
    # from the first surjective level on (within the scanned range)
    for name, doc in catalog_docs.items():
        rep = locate_i1_i2(_core(doc), cap=4, full_scan=True)
        for rec in rep.levels:
            if isinstance(rep.i2, int):
                assert rec.injective == (rec.i <= rep.i2), name
            elif rep.i2 == "-infinity":
                assert not rec.injective, name
            if isinstance(rep.i1, int):
                assert rec.surjective == (rec.i >= rep.i1), name
            else:
                assert not rec.surjective, name


def test_domain_dimension():
    f = germ("whitney-psi2")
    for i in range(3):
        model = ks_matrix(f, i)
        assert len(model.domain_basis) == f.p * comb(f.p - 1 + i, i)


def test_stability_bits(catalog_docs):
    for name, doc in catalog_docs.items():
        want_stable = doc.options.get("expect_stable")
        want_isolated = doc.options.get("expect_isolated")
        if want_stable is None and want_isolated is None:
            continue
        verdict = classify_stable(_core(doc))
        if want_stable is not None:
            assert int(verdict.stable) == want_stable, name
        if want_isolated is not None:
            assert int(verdict.isolated) == want_isolated, name


def test_identity_dimension_count_iff_level0_bijective(catalog_docs):
    # p = (p-n)*delta + gamma holds exactly when the level-0 model is
    # bijective (its target has dimension (p-n)*delta + gamma and its domain
    # has dimension p)
    for name, doc in catalog_docs.items():
        f = _core(doc)
        verdict = classify_stable(f)
        if not verdict.stable:
            continue
        inv = invariants(f, max_i=0)
        identity = f.p == (f.p - f.n) * inv.delta + inv.gamma
        rep = locate_i1_i2(f)
        bijective = rep.levels[0].surjective and rep.levels[0].injective
        assert identity == bijective, name


# ---------------------------------------------------------------------------
# minimal generator counts
# ---------------------------------------------------------------------------

FROZEN_COUNTS = {
    "morin-2": 2,
    "morin-3": 3,
    "whitney-psi2": 4,
    "whitney-psi3": 11,
    "phi-3": 7,
    "phi-63": 4,
    "multistable": 2,
    "e0": 2,
    "curve-457": 2,
    "cusp-pair": 2,
    "trigerm": 2,
    "rieger-36": 2,
    "rieger-ruas": 17,
}


@pytest.mark.parametrize("name,want", sorted(FROZEN_COUNTS.items()))
def test_min_generators_frozen(name, want):
    mg = min_generators(germ(name), mode="both")
    assert mg.count == want
    assert mg.formula_count == mg.bruteforce_count == want


def test_min_generators_needs_matching_levels():
    with pytest.raises(HypothesisError):
        min_generators(germ("tangent-fold-1"))
    with pytest.raises(HypothesisError):
        min_generators(_core(catalog.load("sfold-1-plus")))
