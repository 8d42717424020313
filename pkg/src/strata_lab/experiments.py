"""Batch runs: the cohomology table over sampled members, and the dimension ledger."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field

import numpy as np

from .classify import H1_PLUS1, STRATUM_TABLE
from .cohomology import cohomology_profile, h0_twist, h1_twist
from .dimensions import CODIMENSIONS, AMBIENT, DimensionRow, dimension_row
from .field import DEFAULT_FIELD, Field
from .geometry import stratified_sample
from .morphism import LABELS

HILBERT_RANGE = range(-2, 4)


def hilbert_ok(phi) -> bool:
    """h0(F(m)) - h1(F(m)) = 6m + 2 for m in -2..3."""
    return all(h0_twist(phi, m) - h1_twist(phi, m) == 6 * m + 2 for m in HILBERT_RANGE)


def label_seeds(seed: int, labels=LABELS) -> dict[str, np.random.SeedSequence]:
    """One child seed per stratum, so a row does not depend on which others ran."""
    children = np.random.SeedSequence(seed).spawn(len(LABELS))
    return {lab: children[LABELS.index(lab)] for lab in labels}


@dataclass
class TableRow:
    label: str
    expected: tuple[int, int, int]
    samples: int
    triples: Counter = dc_field(default_factory=Counter)
    h1_plus1: Counter = dc_field(default_factory=Counter)
    hilbert_failures: int = 0
    draws: int = 0
    rejections: Counter = dc_field(default_factory=Counter)

    @property
    def triple_ok(self) -> bool:
        return set(self.triples) == {self.expected}

    @property
    def h1_plus1_ok(self) -> bool:
        return set(self.h1_plus1) == {H1_PLUS1[self.label]}

    @property
    def agrees(self) -> bool:
        return self.triple_ok and self.h1_plus1_ok and self.hilbert_failures == 0

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "expected": list(self.expected),
            "observed": {",".join(map(str, t)): n for t, n in sorted(self.triples.items())},
            "h1_plus1": {str(k): n for k, n in sorted(self.h1_plus1.items())},
            "hilbert_failures": self.hilbert_failures,
            "samples": self.samples,
            "draws": self.draws,
            "rejections": dict(sorted(self.rejections.items())),
            "agrees": self.agrees,
        }


def table_row(label: str, samples: int, seed, field: Field = DEFAULT_FIELD,
              check_hilbert: bool = True) -> TableRow:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    row = TableRow(label, STRATUM_TABLE[label], samples)
    for child in seed.spawn(samples):
        res = stratified_sample(label, child, field)
        row.draws += res.draws
        row.rejections.update(res.rejections)
        prof = cohomology_profile(res.morphism)
        row.triples[prof.triple] += 1
        row.h1_plus1[prof.h1_plus1] += 1
        if check_hilbert and not hilbert_ok(res.morphism):
            row.hilbert_failures += 1
    return row


def reproduce_table(samples: int = 100, seed: int = 0, field: Field = DEFAULT_FIELD,
                    labels=LABELS, check_hilbert: bool = True) -> list[TableRow]:
    seeds = label_seeds(seed, labels)
    return [table_row(lab, samples, seeds[lab], field, check_hilbert) for lab in labels]


def table_markdown(rows: list[TableRow]) -> str:
    lines = [
        "| stratum | expected | observed | h1(F(1)) | hilbert ok | draws | agrees |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in rows:
        obs = ", ".join(f"{t} x{n}" for t, n in sorted(r.triples.items()))
        h1 = ", ".join(f"{k} x{n}" for k, n in sorted(r.h1_plus1.items()))
        lines.append(f"| {r.label} | {r.expected} | {obs} | {h1} | "
                     f"{r.samples - r.hilbert_failures}/{r.samples} | {r.draws} | {r.agrees} |")
    return "\n".join(lines)


def dimension_ledger(seed: int = 0, field: Field = DEFAULT_FIELD) -> list[DimensionRow]:
    return [dimension_row(lab, seed, field) for lab in LABELS]


def ledger_markdown(rows: list[DimensionRow]) -> str:
    lines = [
        "| stratum | fibration | parameters | orbit | dim | codim | 37 - dim = codim |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in rows:
        fmt = lambda v: "-" if v is None else str(v)  # noqa: E731
        ok = AMBIENT - r.dimension == CODIMENSIONS[r.label] == r.codimension
        lines.append(f"| {r.label} | {fmt(r.fibration)} | {fmt(r.parameters)} | {r.orbit} | "
                     f"{r.dimension} | {r.codimension} | {ok} |")
    return "\n".join(lines)
