"""Built-in catalog: entry inventory and recorded-option hygiene."""

from liftfields import catalog

EXPECTED_NAMES = {
    "bigerm-69",
    "curve-457",
    "cusp-pair",
    "e0",
    "embedding",
    "fold-line",
    "morin-2",
    "morin-3",
    "multistable",
    "phi-3",
    "phi-63",
    "rieger-36",
    "rieger-ruas",
    "sfold-1-minus",
    "sfold-1-plus",
    "sfold-2-minus",
    "sfold-2-plus",
    "suspended-69",
    "tangent-fold-1",
    "tangent-fold-2",
    "trigerm",
    "whitney-psi2",
    "whitney-psi3",
}

KNOWN_OPTIONS = {
    "expect_i1",
    "expect_i2",
    "expect_i1_infinite",
    "expect_i2_neg_infinite",
    "expect_count",
    "expect_lift_count",
    "expect_stable",
    "expect_isolated",
    "expect_delta",
}


def test_inventory():
    assert set(catalog.names()) == EXPECTED_NAMES


def test_every_entry_loads(catalog_docs):
    for name, doc in catalog_docs.items():
        f = doc.to_multigerm()
        assert f.num_branches >= 1
        assert doc.n == f.n and doc.p == f.p


def test_unknown_entry_raises():
    import pytest

    with pytest.raises(KeyError):
        catalog.source("no-such-entry")


def test_options_are_known_keys(catalog_docs):
    for name, doc in catalog_docs.items():
        assert set(doc.options) <= KNOWN_OPTIONS, name


def test_field_block_arity(catalog_docs):
    for name, doc in catalog_docs.items():
        for block in doc.fields.values():
            width = (
                len(doc.unfolding.target_vars)
                if block.over_unfolding
                else len(doc.target_vars)
            )
            for vf in block.fields:
                assert len(vf) == width, (name, block.name)


def test_expected_level_decoders():
    doc = catalog.load("sfold-1-plus")
    assert catalog.expected_i1(doc) == "infinity up to cap"
    assert catalog.expected_i2(doc) == "-infinity"
    doc = catalog.load("whitney-psi2")
    assert catalog.expected_i1(doc) == 0
    assert catalog.expected_i2(doc) == 0
