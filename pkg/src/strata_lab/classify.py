"""Stratum predicates and the classifier.

Predicates are evaluated on the canonical (twist-sorted) form of a morphism;
block ``phi_kl`` groups rows by the k-th smallest target twist and columns by
the l-th smallest source twist.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from . import __version__
from .cohomology import CohomologyProfile, cohomology_profile
from .errors import StrataError
from .kronecker import KroneckerModule, kronecker_semistable, linear_forms_independent
from .morphism import (
    SheafMorphism,
    TEMPLATES,
    block,
    canonicalize,
    is_injective,
    match_template,
    validate_morphism,
)
from .patterns import minors_independent, x0_pattern_free, x2_form_free, x4_condition, x4_pattern_free
from .poly import exact_divide

# (h0(F(-1)), h1(F), h0(F ⊗ Ω^1(1))) per stratum
STRATUM_TABLE = {
    "X0": (0, 0, 0),
    "X1": (0, 0, 1),
    "X2": (0, 1, 1),
    "X3": (0, 1, 2),
    "X4": (1, 1, 3),
    "X5": (1, 2, 4),
    "X6": (2, 3, 6),
}
H1_PLUS1 = {label: int(label == "X6") for label in STRATUM_TABLE}

# cells (canonical order) that must vanish for the stratum
STRUCTURAL_ZEROS = {
    "X1": ((0, 4), (1, 4), (2, 4)),
    "X3": ((0, 2), (0, 3)),
}

REJECTED = "rejected"
UNRECOGNIZED = "unrecognized-shape"
INDETERMINATE = "indeterminate"


@dataclass
class PredicateOutcome:
    predicates: list[tuple[str, bool | None]] = dc_field(default_factory=list)
    informational: list[tuple[str, bool | None]] = dc_field(default_factory=list)
    certificates: dict[str, Any] = dc_field(default_factory=dict)
    notes: list[str] = dc_field(default_factory=list)

    def add(self, name: str, value: bool | None) -> None:
        self.predicates.append((name, value))

    @property
    def passed(self) -> bool:
        return all(v is True for _, v in self.predicates)

    @property
    def indeterminate(self) -> bool:
        return any(v is None for _, v in self.predicates) and not any(
            v is False for _, v in self.predicates)

    def as_dict(self) -> dict[str, bool | None]:
        return dict(self.predicates)


def _all_zero(rows) -> bool:
    return all(e.is_zero() for row in rows for e in row)


def _kronecker(out: PredicateOutcome, name: str, forms, informational: bool = False) -> bool | None:
    res = kronecker_semistable(KroneckerModule.from_forms(forms))
    if res.probabilistic:
        out.notes.append(f"{name}: decided by reduction modulo {list(res.primes)}")
    if res.witness is not None:
        # basis vectors of the destabilising subspace, as rows
        out.certificates[name] = {"destabilising_subspace": _jsonable(res.witness.T.astype(object))}
    if informational:
        out.informational.append((name, res.semistable))
    else:
        out.add(name, res.semistable)
    return res.semistable


def _pattern_predicates(out: PredicateOutcome, report, prefix: str) -> None:
    for v in report.verdicts:
        name = f"{prefix}_{v.name}_free"
        out.add(name, not v.reachable if v.reachable is not None else None)
        if v.reachable:
            cert: dict[str, Any] = {"cells": [list(c) for c in v.cells]}
            if v.certificate is not None:
                cert["group_element"] = v.certificate.to_json()
            if v.closure_only:
                cert["closure_only"] = True
                out.notes.append(f"{name}: reachable over the algebraic closure only")
            cert.update({k: _jsonable(val) for k, val in v.witness.items()})
            out.certificates[name] = cert


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return [_jsonable(y) for y in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def stratum_predicates(phi: SheafMorphism, label: str | None = None) -> PredicateOutcome:
    """Named conditions for the template ``phi`` matches (canonical order)."""
    shape = match_template(phi)
    if shape is None:
        raise StrataError("morphism matches none of the seven templates")
    if label is not None and label != shape.label:
        raise StrataError(f"morphism has the {shape.label} shape, not {label}")
    label = shape.label
    phi = canonicalize(phi)[0]
    out = PredicateOutcome()
    inj = is_injective(phi)
    out.add("injective", inj)
    if not inj:
        return out
    if label == "X0":
        _pattern_predicates(out, x0_pattern_free(phi), "pattern")
    elif label == "X1":
        out.add("phi12_zero", _all_zero(block(phi, 1, 2)))
        out.add("phi22_independent_entries",
                linear_forms_independent([r[0] for r in block(phi, 2, 2)]))
        _kronecker(out, "phi11_kronecker_semistable", block(phi, 1, 1))
        _kronecker(out, "phi22_kronecker_semistable", block(phi, 2, 2), informational=True)
    elif label == "X2":
        _pattern_predicates(out, x2_form_free(phi), "form")
    elif label == "X3":
        p11, p12 = block(phi, 1, 1)[0][0], block(phi, 1, 2)[0][0]
        out.add("phi13_zero", _all_zero(block(phi, 1, 3)))
        out.add("phi12_nonzero", not p12.is_zero())
        out.add("phi12_not_dividing_phi11", (not p12.is_zero()) and exact_divide(p11, p12) is None)
        p23 = block(phi, 2, 3)
        out.add("phi23_independent_minors", minors_independent(p23))
        _kronecker(out, "phi23_kronecker_semistable", p23, informational=True)
    elif label == "X4":
        psi_det_ok = _x4_det_nonzero(phi)
        out.add("linear_block_det_nonzero", psi_det_ok)
        out.add("mixed_minors_independent", psi_det_ok and x4_condition(phi))
        if not out.passed:
            report = x4_pattern_free(phi)
            tmp = PredicateOutcome()
            _pattern_predicates(tmp, report, "pattern")
            out.certificates.update(tmp.certificates)
            out.notes.extend(tmp.notes)
            out.informational.extend(tmp.predicates)
    elif label == "X5":
        p22, p32 = block(phi, 2, 2)[0][0], block(phi, 3, 2)[0][0]
        out.add("phi11_independent_entries", linear_forms_independent(block(phi, 1, 1)[0]))
        out.add("phi22_nonzero", not p22.is_zero())
        out.add("phi22_not_dividing_phi32", (not p22.is_zero()) and exact_divide(p32, p22) is None)
    elif label == "X6":
        out.add("phi12_independent_entries",
                linear_forms_independent([r[0] for r in block(phi, 1, 2)]))
    return out


def _x4_det_nonzero(phi: SheafMorphism) -> bool:
    lin = block(phi, 1, 2)
    d = lin[0][0] * lin[1][1] - lin[0][1] * lin[1][0]
    return not d.is_zero()


@dataclass
class StratumReport:
    label: str
    predicates: list[tuple[str, bool | None]]
    informational: list[tuple[str, bool | None]] = dc_field(default_factory=list)
    certificates: dict[str, Any] = dc_field(default_factory=dict)
    cohomology: CohomologyProfile | None = None
    det: str | None = None
    field: Any = None
    seed: int | None = None
    warnings: list[str] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)
    shape_label: str | None = None

    @property
    def accepted(self) -> bool:
        return self.label in STRATUM_TABLE

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "predicates": [{"name": n, "value": v} for n, v in self.predicates],
            "informational": [{"name": n, "value": v} for n, v in self.informational],
            "certificates": self.certificates,
            "cohomology": self.cohomology.to_json() if self.cohomology else None,
            "det": self.det,
            "warnings": self.warnings,
            "notes": self.notes,
            "version": __version__,
            "field": self.field.to_json() if self.field is not None else None,
            "seed": self.seed,
        }


def classify(phi: SheafMorphism, seed: int | None = None) -> StratumReport:
    """Classify ``phi`` into X0..X6, ``rejected``, ``unrecognized-shape`` or
    ``indeterminate``; problems are reported in the result, not raised."""
    violations = validate_morphism(phi)
    shape = match_template(phi) if not violations and phi.is_square else None
    if shape is None:
        warnings = [str(v) for v in violations] or [
            f"shape {phi.source} -> {phi.target} matches no template"]
        return StratumReport(UNRECOGNIZED, [], field=phi.field, seed=seed, warnings=warnings)
    canon = canonicalize(phi)[0]
    outcome = stratum_predicates(canon)
    report = StratumReport(
        REJECTED,
        outcome.predicates,
        outcome.informational,
        outcome.certificates,
        field=phi.field,
        seed=seed,
        notes=outcome.notes,
        shape_label=shape.label,
    )
    if not dict(outcome.predicates)["injective"]:
        return report
    report.det = canon.det.to_str()
    report.cohomology = cohomology_profile(canon)
    if outcome.passed:
        report.label = shape.label
        prof = report.cohomology
        if prof.triple != STRATUM_TABLE[shape.label] or prof.h1_plus1 != H1_PLUS1[shape.label]:
            report.warnings.append(
                f"profile {prof.triple}, h1(F(1))={prof.h1_plus1} disagrees with the "
                f"{shape.label} row {STRATUM_TABLE[shape.label]}"
            )
    elif outcome.indeterminate:
        report.label = INDETERMINATE
    return report
