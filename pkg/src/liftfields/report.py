"""Analysis reports: plain-text and schema-validated JSON serialization.

An :class:`AnalysisReport` bundles everything one CLI invocation computed
about a single germ document — numeric invariants, the level-by-level map
scan, generator counts, and any constructed module of liftable fields —
together with timings and the configuration that produced them, so results
are reproducible from the report alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional, Sequence

from . import __version__
from .germs import GermInvariants
from .ksmaps import KSReport, MinGeneratorCount, StabilityVerdict
from .lift import LiftModule
from .poly import Polynomial

FieldVector = Sequence[Polynomial]


@dataclass
class ReportConfig:
    """Echo of the knobs an invocation ran with."""

    max_i: int = 6
    max_degree: int = 12
    cert_order: int = 12
    mode: str = "both"

    def to_json(self) -> dict:
        return {
            "max_i": self.max_i,
            "max_degree": self.max_degree,
            "cert_order": self.cert_order,
            "mode": self.mode,
        }


def _level_value(v) -> int | str:
    """Levels are integers or the sentinels used by the scan."""
    return v


def render_field(vf: FieldVector, names: Sequence[str]) -> str:
    return "(" + ", ".join(c.render(names) for c in vf) + ")"


@dataclass
class AnalysisReport:
    command: str
    germ_name: str
    config: ReportConfig
    invariants: Optional[GermInvariants] = None
    ks: Optional[KSReport] = None
    stability: Optional[StabilityVerdict] = None
    min_generators: Optional[MinGeneratorCount] = None
    lift: Optional[LiftModule] = None
    lift_target_vars: Optional[Sequence[str]] = None
    kernel_level: Optional[int] = None
    kernel_fields: Optional[list[FieldVector]] = None
    extra: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        doc: dict[str, Any] = {
            "tool": "liftfields",
            "version": __version__,
            "command": self.command,
            "germ": self.germ_name,
            "config": self.config.to_json(),
            "warnings": list(self.warnings),
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
        }
        if self.invariants is not None:
            inv = self.invariants
            doc["invariants"] = {
                "n": inv.n,
                "p": inv.p,
                "corank": inv.corank,
                "delta": inv.delta,
                "delta_per_branch": list(inv.delta_per_branch),
                "gamma": inv.gamma,
                "num_branches": inv.num_branches,
                "ell": inv.ell,
                "i_delta": {str(k): v for k, v in inv.i_delta.items()},
                "i_gamma": {str(k): v for k, v in inv.i_gamma.items()},
                "mode": inv.mode,
            }
        if self.ks is not None:
            doc["ks"] = {
                "cap": self.ks.cap,
                "i1": _level_value(self.ks.i1),
                "i2": _level_value(self.ks.i2),
                "levels": [
                    {
                        "i": rec.i,
                        "surjective": rec.surjective,
                        "injective": rec.injective,
                        "kernel_dim": rec.kernel_dim,
                        "cokernel_dim": rec.cokernel_dim,
                    }
                    for rec in self.ks.levels
                ],
            }
        if self.stability is not None:
            doc["stability"] = {
                "stable": self.stability.stable,
                "isolated": self.stability.isolated,
            }
        if self.min_generators is not None:
            mg = self.min_generators
            doc["min_generators"] = {
                "count": mg.count,
                "level": mg.i,
                "formula_count": mg.formula_count,
                "bruteforce_count": mg.bruteforce_count,
                "mode": mg.mode,
            }
        if self.lift is not None:
            names = list(self.lift_target_vars or [])
            doc["lift"] = {
                "provenance": self.lift.provenance,
                "cert_order": self.lift.cert_order,
                "count": self.lift.count,
                "expected_count": self.lift.expected_count,
                "generators": [
                    {
                        "field": render_field(cert.eta, names),
                        "exact": cert.exact,
                        "order": cert.order,
                        "residual_low_degree": cert.residual_low_degree,
                    }
                    for cert in self.lift.generators
                ],
            }
        if self.kernel_fields is not None:
            names = list(self.lift_target_vars or [])
            doc["kernel"] = {
                "level": self.kernel_level,
                "dimension": len(self.kernel_fields),
                "fields": [render_field(vf, names) for vf in self.kernel_fields],
            }
        if self.extra:
            doc["extra"] = self.extra
        return doc

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"

    # -- plain-text rendering -------------------------------------------
    def to_text(self) -> str:
        lines = [f"== {self.command} {self.germ_name} =="]
        if self.invariants is not None:
            inv = self.invariants
            lines.append(
                f"n={inv.n} p={inv.p} corank={inv.corank} branches={inv.num_branches}"
            )
            lines.append(f"delta={inv.delta} (per branch {list(inv.delta_per_branch)})"
                         f" gamma={inv.gamma} ell={inv.ell} [{inv.mode}]")
            if inv.i_delta:
                hi = " ".join(
                    f"{k}delta={inv.i_delta[k]} {k}gamma={inv.i_gamma[k]}"
                    for k in sorted(inv.i_delta)
                )
                lines.append(f"higher: {hi}")
        if self.ks is not None:
            for rec in self.ks.levels:
                lines.append(
                    f"level {rec.i}: surjective={rec.surjective}"
                    f" injective={rec.injective} ker={rec.kernel_dim}"
                    f" coker={rec.cokernel_dim}"
                )
            lines.append(f"i1={self.ks.i1}  i2={self.ks.i2}  (cap {self.ks.cap})")
        if self.stability is not None:
            lines.append(
                f"stable={self.stability.stable} isolated={self.stability.isolated}"
            )
        if self.min_generators is not None:
            mg = self.min_generators
            detail = ""
            if mg.formula_count is not None or mg.bruteforce_count is not None:
                detail = (
                    f" (formula={mg.formula_count} bruteforce={mg.bruteforce_count})"
                )
            lines.append(f"minimal generators: {mg.count} at level {mg.i}"
                         f" [{mg.mode}]{detail}")
        if self.kernel_fields is not None:
            names = list(self.lift_target_vars or [])
            lines.append(
                f"kernel at level {self.kernel_level}:"
                f" dimension {len(self.kernel_fields)}"
            )
            for vf in self.kernel_fields:
                lines.append(f"  {render_field(vf, names)}")
        if self.lift is not None:
            names = list(self.lift_target_vars or [])
            lines.append(
                f"liftable module [{self.lift.provenance}]:"
                f" {self.lift.count} generators, certified to order"
                f" {self.lift.cert_order}"
            )
            for cert in self.lift.generators:
                tag = "exact" if cert.exact else f"order {cert.order}"
                lines.append(f"  {render_field(cert.eta, names)}  [{tag}]")
        for key, val in self.extra.items():
            lines.append(f"{key}: {val}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def load_schema() -> dict:
    """The shipped JSON schema every serialized report validates against."""
    text = resources.files("liftfields").joinpath("report_schema.json").read_text(
        encoding="utf-8"
    )
    return json.loads(text)


def validate_report(doc: dict) -> None:
    """Raise jsonschema.ValidationError if the report violates the schema."""
    import jsonschema

    jsonschema.validate(doc, load_schema())
