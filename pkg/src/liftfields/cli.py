"""Command-line interface.

Subcommands operate on a germ document, given either as a path to a
``.germ`` file or as the name of a built-in catalog entry:

- ``analyze``    invariants, level scan, stability, minimal generator count
- ``kernel``     kernel basis of the level-``i`` matrix model
- ``construct``  generating set of the liftable module by kernel completion
- ``unfold``     generating set by restriction from a one-parameter stable
                 unfolding (requires the document's ``unfolding`` block)
- ``check``      re-verify a named block of claimed liftable fields
- ``transport``  push a field block through the document's diffeomorphism
- ``reduce``     strip quadratic suspension variables and re-verify the
                 reference fields over the core germ
- ``catalog``    list built-in entries, or run them all with ``--run-all``

Exit codes: 0 success; 1 hypothesis violation (non-liftable field, level
mismatch, unstable unfolding); 2 resource cap reached before a decision;
3 parse or semantic error in the input; 4 internal consistency failure
(formula and brute-force computations disagree).

The environment variable ``LIFTFIELDS_WORKDIR`` overrides the directory
against which relative document paths are resolved; nothing else is read
from the environment.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import catalog
from .germs import (
    HypothesisError,
    NotFiniteMultiplicityError,
    invariants,
    reduce_to_core,
)
from .ksmaps import (
    ConsistencyError,
    classify_stable,
    ks_matrix,
    locate_i1_i2,
    min_generators,
)
from .lift import (
    NotLiftableError,
    complete_generators,
    restrict_from_unfolding,
    solve_lift,
    transport,
)
from .parser import ParseError, parse
from .report import AnalysisReport, ReportConfig, render_field, validate_report

EXIT_OK = 0
EXIT_HYPOTHESIS = 1
EXIT_RESOURCE = 2
EXIT_PARSE = 3
EXIT_INCONSISTENT = 4


class ResourceCapError(RuntimeError):
    """The scan cap was reached before the question could be decided."""


def _load_document(ref: str):
    """Resolve a document reference: file path first, then catalog name."""
    workdir = os.environ.get("LIFTFIELDS_WORKDIR", "")
    path = ref if os.path.isabs(ref) or not workdir else os.path.join(workdir, ref)
    if os.path.isfile(path):
        with open(path, encoding="utf-8") as fh:
            return parse(fh.read())
    if ref in catalog.names():
        return catalog.load(ref)
    raise ParseError(f"no such document file or catalog entry: {ref!r}", 0, 0)


def _core_germ(doc):
    """The document's multigerm, reduced when the source dimension exceeds
    the target dimension (the liftable module is unchanged by reduction)."""
    f = doc.to_multigerm()
    if f.n > f.p:
        return reduce_to_core(f), True
    return f, False


def _emit(report: AnalysisReport, as_json: bool) -> None:
    if as_json:
        doc = report.to_json()
        validate_report(doc)
        sys.stdout.write(report.to_json_text())
    else:
        sys.stdout.write(report.to_text())


# ---------------------------------------------------------------------------
# subcommand implementations (each returns an AnalysisReport)
# ---------------------------------------------------------------------------

def _cmd_analyze(doc, cfg: ReportConfig) -> AnalysisReport:
    rep = AnalysisReport("analyze", doc.name, cfg)
    f, reduced = _core_germ(doc)
    if reduced:
        rep.extra["reduced_to_core"] = True
    t0 = time.perf_counter()
    rep.invariants = invariants(f, max_i=3, mode=cfg.mode)
    rep.timings["invariants"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    ks = locate_i1_i2(f, cap=cfg.max_i)
    rep.ks = ks
    rep.stability = classify_stable(f)
    rep.timings["level_scan"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    try:
        rep.min_generators = min_generators(f, mode=cfg.mode, cap=cfg.max_i, report=ks)
    except HypothesisError as exc:
        rep.warnings.append(f"minimal generator count unavailable: {exc}")
    rep.timings["min_generators"] = time.perf_counter() - t0
    return rep


def _cmd_kernel(doc, cfg: ReportConfig, level: int) -> AnalysisReport:
    rep = AnalysisReport("kernel", doc.name, cfg)
    f, _ = _core_germ(doc)
    t0 = time.perf_counter()
    model = ks_matrix(f, level)
    rep.kernel_level = level
    rep.kernel_fields = model.kernel_fields(f.target_vars)
    rep.lift_target_vars = f.target_vars
    rep.timings["kernel"] = time.perf_counter() - t0
    return rep


def _cmd_construct(doc, cfg: ReportConfig) -> AnalysisReport:
    rep = AnalysisReport("construct", doc.name, cfg)
    f, reduced = _core_germ(doc)
    if reduced:
        rep.extra["reduced_to_core"] = True
    t0 = time.perf_counter()
    ks = locate_i1_i2(f, cap=cfg.max_i)
    rep.ks = ks
    if ks.i1 == "infinity up to cap":
        raise ResourceCapError(
            f"no surjective level found up to the cap {cfg.max_i}"
        )
    rep.lift = complete_generators(
        f, cap=cfg.max_i, max_extra_degree=cfg.max_degree, report=ks
    )
    rep.lift_target_vars = f.target_vars
    rep.timings["construct"] = time.perf_counter() - t0
    return rep


def _cmd_unfold(doc, cfg: ReportConfig) -> AnalysisReport:
    rep = AnalysisReport("unfold", doc.name, cfg)
    if doc.unfolding is None:
        raise ParseError(f"document {doc.name!r} has no unfolding block", 0, 0)
    spec = doc.to_unfolding_spec()
    if not classify_stable(spec.F).stable:
        raise HypothesisError("unfolding not stable")
    spec.stable_certified = True
    lift_F = None
    block = doc.fields.get("liftF")
    if block is not None and block.over_unfolding:
        lift_F = block.fields
    t0 = time.perf_counter()
    rep.lift = restrict_from_unfolding(spec, lift_F=lift_F, cert_order=cfg.cert_order)
    rep.lift_target_vars = doc.target_vars
    rep.timings["unfold"] = time.perf_counter() - t0
    return rep


def _cmd_check(doc, cfg: ReportConfig, block_name: str) -> AnalysisReport:
    rep = AnalysisReport("check", doc.name, cfg)
    if block_name in doc.fields:
        blocks = [doc.fields[block_name]]
    elif os.path.isfile(block_name):
        with open(block_name, encoding="utf-8") as fh:
            blocks = list(parse(fh.read()).fields.values())
    else:
        raise ParseError(
            f"no fields block or file named {block_name!r}", 0, 0
        )
    f, _ = _core_germ(doc)
    F = doc.to_unfolding_spec().F if doc.unfolding is not None else None
    checked = []
    t0 = time.perf_counter()
    for block in blocks:
        if block.over_unfolding:
            if F is None:
                raise ParseError(
                    f"fields block {block.name!r} is over an unfolding but the"
                    " document has none", 0, 0
                )
            target, names = F, F.target_vars
        else:
            target, names = f, f.target_vars
        for vf in block.fields:
            cert = solve_lift(target, vf, cfg.cert_order)
            checked.append(
                f"{block.name}: {render_field(vf, names)} "
                + ("[exact]" if cert.exact else f"[order {cert.order}]")
            )
    rep.timings["check"] = time.perf_counter() - t0
    rep.extra["checked"] = checked
    return rep


def _cmd_transport(doc, cfg: ReportConfig, block_name: str) -> AnalysisReport:
    rep = AnalysisReport("transport", doc.name, cfg)
    H, H_inv = doc.diffeo_pair()
    if block_name not in doc.fields:
        raise ParseError(f"no fields block named {block_name!r}", 0, 0)
    t0 = time.perf_counter()
    pushed = transport(doc.fields[block_name].fields, H, H_inv, cfg.cert_order)
    rep.timings["transport"] = time.perf_counter() - t0
    rep.extra["transported"] = [render_field(vf, doc.target_vars) for vf in pushed]
    return rep


def _cmd_reduce(doc, cfg: ReportConfig) -> AnalysisReport:
    rep = AnalysisReport("reduce", doc.name, cfg)
    f = doc.to_multigerm()
    core = reduce_to_core(f)
    rep.extra["core"] = [
        f"{b.label}({', '.join(b.source_vars)}) = ("
        + ", ".join(c.render(b.source_vars) for c in b.components)
        + ")"
        for b in core.branches
    ]
    block = doc.fields.get("reference")
    if block is not None:
        t0 = time.perf_counter()
        verified = []
        for vf in block.fields:
            cert = solve_lift(core, vf, cfg.cert_order)
            verified.append(
                render_field(vf, core.target_vars)
                + ("  [exact]" if cert.exact else f"  [order {cert.order}]")
            )
        rep.extra["lift_generators_over_core"] = verified
        rep.timings["reduce"] = time.perf_counter() - t0
    return rep


def _run_entry(name: str, cfg: ReportConfig) -> AnalysisReport:
    """analyze pipeline plus a check against the entry's recorded values."""
    doc = catalog.load(name)
    rep = _cmd_analyze(doc, cfg)
    opts = doc.options
    got_i1, got_i2 = rep.ks.i1, rep.ks.i2
    want_i1, want_i2 = catalog.expected_i1(doc), catalog.expected_i2(doc)
    if want_i1 is not None and got_i1 != want_i1:
        raise ConsistencyError(f"{name}: i1={got_i1}, recorded {want_i1}")
    if want_i2 is not None and got_i2 != want_i2:
        raise ConsistencyError(f"{name}: i2={got_i2}, recorded {want_i2}")
    want_count = opts.get("expect_count")
    if want_count is not None:
        if rep.min_generators is None or rep.min_generators.count != want_count:
            got = rep.min_generators.count if rep.min_generators else None
            raise ConsistencyError(
                f"{name}: minimal generators {got}, recorded {want_count}"
            )
    want_delta = opts.get("expect_delta")
    if want_delta is not None and rep.invariants.delta != want_delta:
        raise ConsistencyError(
            f"{name}: delta={rep.invariants.delta}, recorded {want_delta}"
        )
    return rep


def _cmd_catalog(cfg: ReportConfig, run_all: bool, as_json: bool) -> int:
    names = catalog.names()
    if not run_all:
        for name in names:
            sys.stdout.write(name + "\n")
        return EXIT_OK
    reports = []
    for name in names:
        rep = _run_entry(name, cfg)
        reports.append(rep)
        if not as_json:
            mg = rep.min_generators.count if rep.min_generators else "-"
            sys.stdout.write(
                f"{name:16s} i1={rep.ks.i1} i2={rep.ks.i2}"
                f" delta={rep.invariants.delta} min_gens={mg}  ok\n"
            )
    if as_json:
        docs = [r.to_json() for r in reports]
        for d in docs:
            validate_report(d)
        import json

        sys.stdout.write(json.dumps(docs, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="liftfields", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(sp, document=True):
        if document:
            sp.add_argument("document", help="path to a .germ file or catalog name")
        sp.add_argument("--max-i", type=int, default=6, dest="max_i",
                        help="level scan cap (default 6)")
        sp.add_argument("--max-degree", type=int, default=12, dest="max_degree",
                        help="completion degree bound (default 12)")
        sp.add_argument("--cert-order", type=int, default=12, dest="cert_order",
                        help="jet order for certificates (default 12)")
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        sp.add_argument("--mode", choices=["formula", "bruteforce", "both"],
                        default="both", help="numeric computation mode")

    common(sub.add_parser("analyze", help="invariants and level scan"))
    sp = sub.add_parser("kernel", help="kernel basis at one level")
    common(sp)
    sp.add_argument("--level", type=int, required=True)
    common(sub.add_parser("construct", help="generators by kernel completion"))
    common(sub.add_parser("unfold", help="generators by unfolding restriction"))
    sp = sub.add_parser("check", help="re-verify claimed liftable fields")
    common(sp)
    sp.add_argument("--fields", default="reference",
                    help="fields block name or document file (default: reference)")
    sp = sub.add_parser("transport", help="push fields through the diffeo block")
    common(sp)
    sp.add_argument("--fields", default="reference",
                    help="fields block to transport (default: reference)")
    common(sub.add_parser("reduce", help="strip quadratic suspension variables"))
    sp = sub.add_parser("catalog", help="list or run built-in entries")
    common(sp, document=False)
    sp.add_argument("--run-all", action="store_true", dest="run_all")
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = ReportConfig(args.max_i, args.max_degree, args.cert_order, args.mode)
    try:
        if args.command == "catalog":
            return _cmd_catalog(cfg, args.run_all, args.json)
        doc = _load_document(args.document)
        if args.command == "analyze":
            rep = _cmd_analyze(doc, cfg)
        elif args.command == "kernel":
            rep = _cmd_kernel(doc, cfg, args.level)
        elif args.command == "construct":
            rep = _cmd_construct(doc, cfg)
        elif args.command == "unfold":
            rep = _cmd_unfold(doc, cfg)
        elif args.command == "check":
            rep = _cmd_check(doc, cfg, args.fields)
        elif args.command == "transport":
            rep = _cmd_transport(doc, cfg, args.fields)
        elif args.command == "reduce":
            rep = _cmd_reduce(doc, cfg)
        else:  # pragma: no cover - argparse enforces the choices
            raise AssertionError(args.command)
        _emit(rep, args.json)
        return EXIT_OK
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except ConsistencyError as exc:
        sys.stderr.write(f"inconsistent: {exc}\n")
        return EXIT_INCONSISTENT
    except ResourceCapError as exc:
        sys.stderr.write(f"cap reached: {exc}\n")
        return EXIT_RESOURCE
    except (HypothesisError, NotLiftableError, NotFiniteMultiplicityError) as exc:
        sys.stderr.write(f"hypothesis violated: {exc}\n")
        return EXIT_HYPOTHESIS
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
