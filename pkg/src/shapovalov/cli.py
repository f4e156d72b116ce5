"""Command-line front end: ``shapovalov <command> [flags]``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or configuration error.
JSON output is canonical (sorted keys, fixed ordering) so identical jobs give
byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import conventions
from .exactnum import rat, rat_str
from .liealg import FAMILIES, AlgebraId, BandOverflow, build_algebra
from .rootsys import GradedWeight, cartan_basis, root_dump, triangularity_failures, weight_variables

COMMANDS = ("bracket", "dump-algebra", "roots", "casimir-check", "gram", "shapdet",
            "irreducible", "reconcile")


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    """The JSON schema shipped for an artifact kind (see ``SCHEMA_FOR``)."""
    return json.loads(resources.files("shapovalov").joinpath("schemas", f"{name}.json").read_text())


SCHEMA_FOR = {
    "bracket": "bracket",
    "dump-algebra": "table",
    "roots": "roots",
    "casimir-check": "casimir",
    "gram": "gram",
    "shapdet": "shapdet",
    "irreducible": "irreducible",
    "reconcile": "reconcile",
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shapovalov", description=__doc__.splitlines()[0])
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("operands", nargs="*", help="generators for the bracket command")
    p.add_argument("--job", help="JSON job file; its keys fill in any flag not given")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--k", type=int)
    p.add_argument("--band", type=int)
    p.add_argument("--height", type=int, help="height bound (grade window for k16)")
    p.add_argument("--deficit", help="comma separated d-vector; for k16 the lead comes first")
    p.add_argument("--weights", help="JSON file with a list of Cartan coordinates")
    p.add_argument("--duals", choices=("right", "left"))
    p.add_argument("--grid", type=int, help="number of grid points for reconcile")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("json", "text"))
    p.add_argument("--out")
    return p


DEFAULTS = {"duals": "right", "format": "json", "seed": 0, "grid": 25}


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    if args.job:
        try:
            job = json.loads(Path(args.job).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read job file: {exc}") from None
        for key, value in job.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise UsageError(f"unknown job key {key!r}")
            if getattr(args, attr) in (None, []):
                setattr(args, attr, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    if args.command is None:
        raise UsageError("no command given")
    if args.command not in COMMANDS:
        raise UsageError(f"unknown command {args.command!r}")
    if args.family is None:
        raise UsageError("--family is required")
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}")
    if args.k is None:
        args.k = 3 if args.family == "k16" else None
    if args.k is None:
        raise UsageError("--k is required")
    if args.height is not None and args.height < 1:
        raise UsageError("--height must be positive")
    if args.band is not None and args.band < 1:
        raise UsageError("--band must be positive")
    return args


def _table(args):
    try:
        return build_algebra(AlgebraId(args.family, args.k, args.band))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_deficit(table, text) -> GradedWeight:
    try:
        values = [int(v) for v in str(text).split(",")]
    except ValueError:
        raise UsageError(f"bad deficit {text!r}") from None
    if table.family == "k16":
        if len(values) != table.k + 1:
            raise UsageError(f"k16 deficit needs {table.k + 1} entries (lead first)")
        return GradedWeight(values[0], tuple(values[1:]))
    if len(values) != table.k:
        raise UsageError(f"deficit needs {table.k} entries")
    return GradedWeight(0, tuple(values))


def _load_weights(table, path):
    if path is None:
        raise UsageError("--weights is required")
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read weights: {exc}") from None
    if isinstance(doc, dict):
        doc = doc.get("weights", doc)
    if isinstance(doc, dict):
        names = [str(v) for v in weight_variables(table)]
        missing = [n for n in names if n not in doc]
        if missing:
            raise UsageError(f"weights missing {', '.join(missing)}")
        doc = [doc[n] for n in names]
    n = len(cartan_basis(table))
    if not isinstance(doc, list) or len(doc) != n:
        raise UsageError(f"expected {n} weight coordinates")
    try:
        return [rat(v) for v in doc]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"bad weight value: {exc}") from None


# commands ------------------------------------------------------------------------

def cmd_bracket(args):
    from .superpoly import format_spoly, parse_spoly
    from .liealg import contact_bracket, poisson_bracket

    if len(args.operands) != 2:
        raise UsageError("bracket takes two generators")
    k = args.k
    try:
        f, g = (parse_spoly(s, k) for s in args.operands)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    br = contact_bracket(f, g) if args.family == "k16" else poisson_bracket(f, g)
    return 0, {"family": args.family, "k": k, "f": format_spoly(f), "g": format_spoly(g),
               "bracket": format_spoly(br)}


def cmd_dump_algebra(args):
    table = _table(args)
    return 0, table.to_json()


def cmd_roots(args):
    table = _table(args)
    doc = root_dump(table)
    doc["triangularity_failures"] = [
        [table.basis[x].label, table.basis[y].label] for x, y in triangularity_failures(table)
    ]
    return (1 if doc["triangularity_failures"] else 0), doc


def cmd_casimir_check(args):
    from .casimir import casimir_report, right_duals, two_rho_check
    from .verma import k16_scalar_check

    if args.family == "k16":
        grade = args.height or 3
        band = args.band or grade + 2
        try:
            doc = k16_scalar_check(band, grade)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        table = build_algebra(AlgebraId("k16", 3, band))
        H = cartan_basis(table)
        duals = right_duals(table, H)
        doc["cartan_duals"] = {
            table.basis[i].label: [table.basis[j].label, rat_str(s)]
            for i, (j, s) in sorted(duals.pairs.items())
        }
        doc["family"] = "k16"
        doc["convention"] = {"conv_sign": conventions.CONV_SIGN, "k16_d_sign": conventions.K16_D_SIGN}
        return (0 if doc["passed"] else 1), doc
    if args.family.startswith("loop-"):
        raise UsageError("casimir-check covers po, sh and k16")
    table = _table(args)
    doc = casimir_report(table, args.duals)
    if args.family == "po":
        doc["two_rho"] = two_rho_check(table)
    failed = bool(doc["failures"]) or not doc.get("two_rho", {"passed": True})["passed"]
    return (1 if failed else 0), doc


def _gram_doc(table, block, fact=None):
    doc = {
        "family": table.family,
        "k": table.k,
        "deficit": ([block.deficit.lead] if table.family == "k16" else []) + list(block.deficit.d),
        "basis": [[table.basis[i].label for i in mono] for mono in block.basis],
        "matrix": [[str(x) for x in row] for row in block.matrix],
        "det": str(block.det),
    }
    if fact is not None:
        doc["factors"] = [
            {
                "linear": str(f.linear),
                "candidate": str(f.candidate),
                "multiplicity": f.multiplicity,
                "beta": [_quasiroot_doc(table, q) for q in f.quasiroots],
            }
            for f in fact.factors
        ]
        doc["residual"] = str(fact.residual)
        doc["passed"] = fact.passed
    return doc


def _blocks(args, table):
    from .verma import block_deficits

    if args.deficit is not None:
        return [_parse_deficit(table, args.deficit)]
    if args.height is None:
        raise UsageError("give --deficit or --height")
    return block_deficits(table, args.height)


def _check_family(args):
    if args.family.startswith("loop-"):
        raise UsageError("Verma computations cover po, sh and k16")


def cmd_gram(args):
    from .verma import HighestWeight, VermaModule, gram_matrix

    _check_family(args)
    table = _table(args)
    if args.weights:
        weight = HighestWeight.numeric(table, _load_weights(table, args.weights))
    else:
        weight = HighestWeight.symbolic_weight(table)
    module = VermaModule(table, weight)
    try:
        docs = [_gram_doc(table, gram_matrix(module, d)) for d in _blocks(args, table)]
    except BandOverflow as exc:
        raise UsageError(f"band too small: {exc}") from None
    return 0, {"family": table.family, "k": table.k, "blocks": docs}


def cmd_shapdet(args):
    from .rootsys import height
    from .verma import HighestWeight, VermaModule, gram_matrix, linear_candidates, shapovalov_det

    _check_family(args)
    table = _table(args)
    module = VermaModule(table, HighestWeight.symbolic_weight(table))
    blocks = _blocks(args, table)
    bound = max([args.height or 0] + [height(table, d) for d in blocks] + [1])
    cands = linear_candidates(table, bound)
    docs = []
    try:
        for d in blocks:
            block = gram_matrix(module, d)
            within = [(q, L) for q, L in cands if height(table, q.graded) <= height(table, d)]
            docs.append(_gram_doc(table, block, shapovalov_det(block, within)))
    except BandOverflow as exc:
        raise UsageError(f"band too small: {exc}") from None
    ok = all(doc["passed"] for doc in docs)
    return (0 if ok else 1), {"family": table.family, "k": table.k, "bound": bound, "blocks": docs}


def _quasiroot_doc(table, q):
    return {table.basis[i].label: n for i, n in q.multiplicities}


def cmd_irreducible(args):
    from .verma import irreducible

    _check_family(args)
    table = _table(args)
    a = _load_weights(table, args.weights)
    bound = args.height or 4
    verdict, witnesses = irreducible(table, a, bound)
    return 0, {
        "family": table.family,
        "k": table.k,
        "bound": bound,
        "weights": [rat_str(x) for x in a],
        "irreducible": verdict,
        "witnesses": [_quasiroot_doc(table, q) for q in witnesses],
    }


def reconcile_grid(table, size: int, seed: int) -> list[list[Fraction]]:
    """Deterministic small-integer weights; about a third lie on some hyperplane."""
    from .verma import linear_candidates

    n = len(cartan_basis(table))
    rng = random.Random(seed)
    points = []
    lines = [L for _, L in linear_candidates(table, 4)] if table.family != "k16" else []
    attempt = 0
    while len(points) < size:
        attempt += 1
        a = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        if lines and attempt % 3 == 0:
            # move onto a candidate hyperplane along its first variable
            L = lines[rng.randrange(len(lines))]
            i = next(i for i, e in enumerate(L.leading()[0]) if e)
            unit = [Fraction(int(j == i)) for j in range(n)]
            slope = L.evaluate(unit) - L.evaluate([Fraction(0)] * n)
            a[i] = Fraction(0)
            a[i] = -L.evaluate(a) / slope
        if a not in points:
            points.append(a)
    return points


def reconcile(table, points, bound) -> dict:
    from .rootsys import enumerate_quasiroots
    from .verma import explicit_criterion_check, gram_verdict, irreducible

    quasiroots = enumerate_quasiroots(table, bound)
    rows = []
    for a in points:
        abstract, _ = irreducible(table, a, bound)
        explicit = all(explicit_criterion_check(table, a, q.weight)["explicit"] for q in quasiroots)
        gram, _ = gram_verdict(table, a, bound)
        rows.append({"weights": [rat_str(x) for x in a], "abstract": abstract,
                     "explicit": explicit, "gram": gram})

    def rate(x, y):
        if not rows:
            return None
        return rat_str(Fraction(sum(r[x] == r[y] for r in rows), len(rows)))

    return {
        "family": table.family,
        "k": table.k,
        "bound": bound,
        "points": rows,
        "agreement": {
            "abstract_gram": rate("abstract", "gram"),
            "explicit_gram": rate("explicit", "gram"),
            "abstract_explicit": rate("abstract", "explicit"),
        },
    }


def cmd_reconcile(args):
    if args.family not in ("po", "k16"):
        raise UsageError("reconcile covers po and k16")
    table = _table(args)
    bound = args.height or 4
    if args.grid < 0:
        raise UsageError("--grid must be non-negative")
    doc = reconcile(table, reconcile_grid(table, args.grid, args.seed), bound)
    ok = doc["agreement"]["abstract_gram"] in (None, "1")
    return (0 if ok else 1), doc


HANDLERS = {
    "bracket": cmd_bracket,
    "dump-algebra": cmd_dump_algebra,
    "roots": cmd_roots,
    "casimir-check": cmd_casimir_check,
    "gram": cmd_gram,
    "shapdet": cmd_shapdet,
    "irreducible": cmd_irreducible,
    "reconcile": cmd_reconcile,
}


def _text(doc, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for key in sorted(doc):
            value = doc[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(value)}")
    elif isinstance(doc, list):
        for item in doc:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{doc}")
    return "\n".join(lines)


def render(doc, fmt: str) -> str:
    if fmt == "text":
        return _text(doc) + "\n"
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        args = _resolve(args)
        status, doc = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"shapovalov: error: {exc}", file=sys.stderr)
        return 2
    text = render(doc, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
