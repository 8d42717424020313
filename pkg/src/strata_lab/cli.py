"""``strata-lab`` command line.

Exit codes: 0 success (including a ``rejected`` verdict), 1 ``table``
disagreement, 2 bad input, 3 sampling budget or constructor precondition failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import classify
from .cohomology import cohomology_profile, h0_twist, h1_twist
from .errors import BudgetExceededError, ConsistencyError, PreconditionError, StrataError
from .experiments import dimension_ledger, ledger_markdown, reproduce_table, table_markdown
from .field import GF, QQ, Field
from .geometry import construct_x4, construct_x6, conic_through, stratified_sample
from .io import morphism_to_json, points_from_json, read_morphism, read_points, write_morphism
from .morphism import LABELS, block, canonicalize, is_injective
from .poly import HomPoly, n_monomials

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _field(args) -> Field | None:
    if args.field_prime is None:
        return None
    return QQ if args.field_prime == 0 else GF(args.field_prime)


def _emit(text: str, out: str | None, name: str | None = None) -> None:
    print(text)
    if out:
        path = Path(out)
        if name is not None:
            path.mkdir(parents=True, exist_ok=True)
            path = path / name
        path.write_text(text + "\n", encoding="utf-8")


def cmd_classify(args) -> int:
    phi = read_morphism(args.path, _field(args))
    report = classify(phi, seed=args.seed)
    _emit(_dumps(report.to_json()), args.out)
    return EXIT_OK


def cmd_cohom(args) -> int:
    phi = read_morphism(args.path, _field(args))
    if not is_injective(phi):
        raise PreconditionError("morphism is not injective; its cokernel has no 6m+2 resolution")
    canon = canonicalize(phi)[0]
    prof = cohomology_profile(canon)
    data = {
        "profile": prof.to_json(),
        "twists": [{"k": k, "h0": h0_twist(canon, k), "h1": h1_twist(canon, k)} for k in range(-2, 4)],
        "field": phi.field.to_json(),
        "version": __version__,
    }
    _emit(_dumps(data), args.out)
    return EXIT_OK


def _prime_field(args) -> Field:
    field = _field(args) or GF(101)
    if not field.is_prime:
        raise StrataError("this command samples at random and needs --field-prime > 0")
    return field


def cmd_table(args) -> int:
    field = _prime_field(args)
    rows = reproduce_table(args.samples, args.seed, field)
    md = table_markdown(rows)
    print(md)
    lines = [_dumps({**r.to_json(), "seed": args.seed, "field": field.to_json(),
                     "version": __version__}) for r in rows]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table.md").write_text(md + "\n", encoding="utf-8")
        (out / "table.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK if all(r.agrees for r in rows) else 1


def cmd_dims(args) -> int:
    rows = dimension_ledger(args.seed, _prime_field(args))
    md = ledger_markdown(rows)
    print(md)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "dims.md").write_text(md + "\n", encoding="utf-8")
        (out / "dims.jsonl").write_text("\n".join(_dumps(r.to_json()) for r in rows) + "\n",
                                        encoding="utf-8")
    return EXIT_OK


def _random_quintic(field: Field, rng) -> HomPoly:
    return HomPoly.from_array(field, 5, field.random(rng, n_monomials(5)))


def _parse_point(text: str, field: Field):
    return points_from_json([[c.strip() for c in text.split(",")]], field)[0]


def cmd_construct(args) -> int:
    field = _prime_field(args)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    extra: dict = {}
    if args.kind == "x6":
        if not args.point:
            raise StrataError("construct x6 needs --point")
        x = _parse_point(args.point, field)
        phi = construct_x6(x, _random_quintic(field, rng), _random_quintic(field, rng))
        extra["det_at_point"] = field.to_str(phi.det.evaluate(x.coords))
    else:
        if not args.points:
            raise StrataError("construct x4 needs --points FILE")
        pts = read_points(args.points, field)
        phi = construct_x4(pts, rng)
        values = [phi.det.evaluate(p.coords) for p in pts]
        extra["det_at_points"] = [field.to_str(v) for v in values]
        extra["det_vanishes_at_points"] = all(v == 0 for v in values)
        lin = block(canonicalize(phi)[0], 1, 2)
        quad = lin[0][0] * lin[1][1] - lin[0][1] * lin[1][0]
        extra["linear_block_conic"] = quad.to_str()
        extra["conic_through_points"] = conic_through(pts).to_str()
    report = classify(phi, seed=args.seed).to_json()
    report.update(extra)
    report["morphism"] = morphism_to_json(phi)
    if args.out:
        write_morphism(phi, args.out)
    print(_dumps(report))
    return EXIT_OK


def cmd_sample(args) -> int:
    field = _prime_field(args)
    if args.label not in LABELS:
        raise StrataError(f"unknown stratum {args.label!r}; expected one of {', '.join(LABELS)}")
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    stats = {"label": args.label, "samples": args.samples, "seed": args.seed,
             "field": field.to_json(), "version": __version__, "draws": [], "rejections": {}}
    for i, child in enumerate(np.random.SeedSequence(args.seed).spawn(args.samples)):
        res = stratified_sample(args.label, child, field)
        stats["draws"].append(res.draws)
        for name, n in res.rejections.items():
            stats["rejections"][name] = stats["rejections"].get(name, 0) + n
        if out:
            write_morphism(res.morphism, out / f"{args.label}_{i:03d}.json")
    stats["rejections"] = dict(sorted(stats["rejections"].items()))
    _emit(_dumps(stats), args.out, "stats.json" if out else None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field-prime", type=int, default=None,
                        help="prime p for GF(p); 0 for the rationals (default: GF(101), or the file's field)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--out", default=None, help="output file or directory")

    parser = argparse.ArgumentParser(prog="strata-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a morphism file")
    p.add_argument("path")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("cohom", parents=[common], help="cohomology of the cokernel")
    p.add_argument("path")
    p.set_defaults(func=cmd_cohom)
    p = sub.add_parser("table", parents=[common], help="reproduce the cohomology table")
    p.set_defaults(func=cmd_table)
    p = sub.add_parser("dims", parents=[common], help="stratum dimension ledger")
    p.set_defaults(func=cmd_dims)
    p = sub.add_parser("construct", parents=[common], help="build an X6 or X4 member")
    p.add_argument("kind", choices=["x6", "x4"])
    p.add_argument("--point", help='X6 base point, e.g. "0,0,1"')
    p.add_argument("--points", help="JSON file with five points for X4")
    p.set_defaults(func=cmd_construct)
    p = sub.add_parser("sample", parents=[common], help="draw accepted samples of a stratum")
    p.add_argument("label", help="X0 .. X6")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError:
        raise
    except (BudgetExceededError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if getattr(exc, "histogram", None):
            print("rejections: " + _dumps(exc.histogram), file=sys.stderr)
        return EXIT_BUDGET
    except (StrataError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
