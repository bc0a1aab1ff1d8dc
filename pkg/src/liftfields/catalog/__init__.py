"""Built-in catalog of germ documents.

Entries are data files (``catalog/*.germ``) shared by the test suite, the
CLI, and the experiment scripts.  Recorded expectations live in each entry's
``options`` block:

- ``expect_i1`` / ``expect_i2``: first surjective / last injective level
- ``expect_i1_infinite = 1``: no surjective level up to the scan cap
- ``expect_i2_neg_infinite = 1``: the level-0 map is already non-injective
- ``expect_count``: minimal generator count via the kernel-count recipe
- ``expect_lift_count``: minimal generator count certified at jet level
- ``expect_stable`` / ``expect_isolated``: level-0 classification bits
- ``expect_delta``: local-algebra dimension

Named ``fields`` blocks carry reference generating sets (``reference`` in the
base target coordinates, ``liftF`` over the unfolding target when the stable
unfolding's module must be supplied or checked).
"""

from __future__ import annotations

from importlib import resources

from ..parser import GermDocument, parse

_PACKAGE = "liftfields.catalog"


def names() -> list[str]:
    """Sorted names of all built-in catalog entries."""
    out = []
    for entry in resources.files(_PACKAGE).iterdir():
        if entry.name.endswith(".germ"):
            out.append(entry.name[: -len(".germ")])
    return sorted(out)


def source(name: str) -> str:
    """Raw document text of a catalog entry."""
    path = resources.files(_PACKAGE).joinpath(f"{name}.germ")
    if not path.is_file():
        raise KeyError(f"no catalog entry named {name!r} (have: {', '.join(names())})")
    return path.read_text(encoding="utf-8")


def load(name: str) -> GermDocument:
    """Parse a catalog entry into a germ document."""
    return parse(source(name))


def expected_i1(doc: GermDocument):
    if doc.options.get("expect_i1_infinite"):
        return "infinity up to cap"
    return doc.options.get("expect_i1")


def expected_i2(doc: GermDocument):
    if doc.options.get("expect_i2_neg_infinite"):
        return "-infinity"
    return doc.options.get("expect_i2")
