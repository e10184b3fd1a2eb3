"""Command-line front end: ``corrgap <subcommand> [flags]``.

Every subcommand prints one JSON document (or CSV for ``scan --format csv``)
on standard output. Exit codes: 0 success, 1 a scan found a ratio above the
checked bound, 2 invalid input, 3 ground set above the LP cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import closedform as cf
from . import distributions as dist
from . import gap
from .extensions import (
    MAX_N_PAIRWISE,
    MAX_N_PLUS,
    CapExceeded,
    Distribution,
    as_marginals,
    check_dual_feasible,
    concave_closure,
    convex_closure,
    lower_pairwise,
    multilinear,
    upper_pairwise,
)
from .rational import fmt, parse_list, to_fraction
from .reproduce import DEMO_ALIASES, DEMOS
from .setfn import (
    SetFunction,
    check_monotone,
    check_submodular,
    classify_subpolytope,
    from_json,
    normalize,
)

EXIT_OK, EXIT_FINDING, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(ValueError):
    pass


# -- input parsing ------------------------------------------------------------------


def _load_json_arg(text: str, what: str):
    """Parse ``text`` as inline JSON, or as a path to a JSON file."""
    stripped = text.strip()
    if stripped.startswith(("{", "[")):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"{what}: invalid inline JSON ({exc})") from exc
    path = Path(text)
    if not path.is_file():
        raise InputError(f"{what}: no such file {text!r}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: {text} is not valid JSON ({exc})") from exc


def load_fn(text: str) -> SetFunction:
    doc = _load_json_arg(text, "--fn")
    try:
        return from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"--fn: {exc}") from exc


def load_x(text: str) -> tuple[Fraction, ...]:
    """Comma list ``1/2,1/4``, a JSON list, a JSON file holding a list, or {"x": [...]}."""
    stripped = text.strip()
    if stripped.startswith(("[", "{")) or Path(text).is_file():
        doc = _load_json_arg(text, "--x")
        if isinstance(doc, dict):
            doc = doc.get("x")
        if not isinstance(doc, list):
            raise InputError("--x: expected a list of rationals")
        items = doc
    else:
        items = stripped.split(",")
    try:
        return tuple(to_fraction(v) for v in items)
    except (TypeError, ValueError) as exc:
        raise InputError(f"--x: {exc}") from exc


def _fn_and_x(args) -> tuple[SetFunction, tuple[Fraction, ...]]:
    if args.fn is None or args.x is None:
        raise InputError("--fn and --x are required")
    f, x = load_fn(args.fn), load_x(args.x)
    return f, as_marginals(x, f.n)


def _caps(args) -> tuple[int, int]:
    if args.cap is None:
        return MAX_N_PLUS, MAX_N_PAIRWISE
    return args.cap, args.cap


# -- subcommands ---------------------------------------------------------------------


def cmd_eval(args) -> dict:
    f, x = _fn_and_x(args)
    cap_plus, cap_pp = _caps(args)
    doc = {
        "n": f.n,
        "x": [fmt(v) for v in x],
        "lp": {
            "F": fmt(multilinear(f, x)),
            "f_plus": fmt(concave_closure(f, x, cap_plus).value),
            "f_pp": fmt(upper_pairwise(f, x, cap_pp).value),
            "f_minus": fmt(convex_closure(f, x, cap_plus).value),
            "f_mm": fmt(lower_pairwise(f, x, cap_pp).value),
        },
    }
    if f.n <= 3:
        doc["closed_form"] = {k: fmt(v) for k, v in gap.closed_form_values(f, x).items()}
    return doc


def cmd_gap(args) -> dict:
    f, x = _fn_and_x(args)
    return gap.gap_report(f, x, cap=args.cap).to_json()


def _cert_doc(f: SetFunction, cert, x, value: Fraction | None = None) -> dict:
    verdict = check_dual_feasible(f, cert)
    doc = cert.to_json()
    doc["feasible"] = verdict.holds
    if not verdict.holds:
        doc["violated_at"] = list(verdict.witness)
    obj = cert.objective(x)
    doc["objective"] = fmt(obj)
    if value is not None:
        doc["tight"] = obj == value
    return doc


def cmd_certify(args) -> dict:
    f, x = _fn_and_x(args)
    cap_plus, cap_pp = _caps(args)
    exts = {
        "f_plus": concave_closure(f, x, cap_plus),
        "f_pp": upper_pairwise(f, x, cap_pp),
        "f_minus": convex_closure(f, x, cap_plus),
        "f_mm": lower_pairwise(f, x, cap_pp),
    }
    doc = {
        "n": f.n,
        "x": [fmt(v) for v in x],
        "lp": {
            name: {"value": fmt(e.value), "certificate": _cert_doc(f, e.certificate, x, e.value)}
            for name, e in exts.items()
        },
    }
    if f.n == 3 and check_monotone(f) and f.values[0] != f.values[f.full]:
        plus = exts["f_plus"].value
        labels = classify_subpolytope(normalize(f))
        designated = {
            fam.value: f"lambda{cf.designated_dual(cf.region_n3(x, fam))}"
            for fam in cf.FAMILY_DUALS
            if fam in labels.f_families
        }
        doc["structured_duals"] = {
            "canonical_family": labels.canonical_f.value if labels.canonical_f else None,
            "designated": designated,
            "certificates": [_cert_doc(f, c, x, plus) for c in cf.structured_duals_n3(f)],
        }
    return doc


def _diagnose(d: Distribution, x) -> dict:
    verdict = dist.check_pairwise_independent(d, x)
    doc = {
        "distribution": d.to_json(),
        "pairwise_independent": verdict.holds,
        "cylinder_signature": dist.cylinder_signature(d, x).to_json() if d.n >= 2 else {},
    }
    if not verdict.holds:
        doc["pairwise_failure"] = list(verdict.witness)
    if d.n >= 2:
        doc["covariance_signs"] = {f"{i},{j}": s for (i, j), s in dist.covariance_signs(d).items()}
    return doc


def cmd_dists(args) -> dict:
    if args.x is None:
        raise InputError("--x is required")
    x = as_marginals(load_x(args.x))
    n = len(x)
    f = load_fn(args.fn) if args.fn else None
    if f is not None and f.n != n:
        raise InputError(f"--fn has n = {f.n} but --x has {n} entries")
    out: dict[str, dict] = {}

    def add(name: str, d: Distribution) -> None:
        entry = _diagnose(d, x)
        if f is not None:
            entry["expectation"] = fmt(d.expectation(f))
        out[name] = entry

    add("product", dist.product_distribution(x))
    for name, build in (("small-marginals", dist.construct_small), ("large-marginals", dist.construct_large)):
        try:
            add(name, build(x))
        except dist.ConstructionError:
            pass
    if n == 3:
        bounds = cf.omega_bounds_n3(x)
        if args.omega is not None:
            try:
                add(f"omega-family({fmt(args.omega)})", cf.pairwise_family_n3(x, args.omega))
            except cf.ClosedFormError as exc:
                raise InputError(str(exc)) from exc
        else:
            add("omega-family(low)", cf.pairwise_family_n3(x, bounds.low))
            add("omega-family(high)", cf.pairwise_family_n3(x, bounds.high))
        for fam in cf.FAMILY_DUALS:
            region = cf.region_n3(x, fam)
            key = f"closure-law-{region}"
            if key not in out:
                add(key, dist.region_distribution_n3(x, region))
    if n == 4 and len(set(x)) == 1:
        for regime in ("small", "large"):
            try:
                add(f"identical-{regime}", dist.identical_n4(x[0], regime))
            except dist.ConstructionError:
                pass
    doc = {"n": n, "x": [fmt(v) for v in x], "distributions": out}
    if n == 3:
        doc["omega_bounds"] = {"low": fmt(bounds.low), "high": fmt(bounds.high)}
    return doc


def cmd_regions(args) -> dict:
    doc: dict = {}
    if args.x is not None:
        x = as_marginals(load_x(args.x), 3)
        doc["x"] = [fmt(v) for v in x]
        doc["regions"] = {fam.value: str(cf.region_n3(x, fam)) for fam in cf.FAMILY_DUALS}
    if args.fn is not None:
        f = load_fn(args.fn)
        if f.n != 3:
            raise InputError("subpolytope labels are defined for n = 3")
        doc["monotone"] = check_monotone(f).holds
        doc["submodular"] = check_submodular(f).holds
        if doc["monotone"] and f.values[0] != f.values[f.full]:
            doc["subpolytopes"] = classify_subpolytope(normalize(f)).to_json()
        else:
            doc["subpolytopes"] = None
    if not doc:
        raise InputError("regions needs --x, --fn, or both")
    return doc


def _load_corpus(text: str) -> list[tuple[SetFunction, tuple[Fraction, ...]]]:
    doc = _load_json_arg(text, "--corpus")
    items = doc.get("instances") if isinstance(doc, dict) else doc
    if not isinstance(items, list):
        raise InputError("--corpus: expected a list of {fn, x} objects")
    corpus = []
    for k, item in enumerate(items):
        try:
            f = from_json(item["fn"])
            x = as_marginals([to_fraction(v) for v in item["x"]], f.n)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"--corpus entry {k}: {exc}") from exc
        corpus.append((f, x))
    return corpus


def cmd_scan(args):
    if args.corpus is not None:
        result = gap.scan_corpus(_load_corpus(args.corpus))
    else:
        if args.generator is None:
            raise InputError("scan needs --generator or --corpus")
        if args.count < 1 or args.workers < 1:
            raise InputError("--count and --workers must be positive")
        try:
            gap.parse_generator(args.generator)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        result = gap.scan(args.generator, args.count, args.seed, workers=args.workers)
    return result


def cmd_demo(args) -> dict:
    name = DEMO_ALIASES.get(args.name, args.name)
    if name == "tight-kuniform":
        return DEMOS[name](args.n or 4, args.k or 2, args.p)
    if name == "tight-rank1":
        return DEMOS[name](args.n or 3)
    if name == "appendix-a1":
        eps = parse_list(args.epsilon) if args.epsilon else (Fraction(1, 10), Fraction(1, 100))
        return DEMOS[name](eps)
    if name == "appendix-a2":
        ns = [args.n] if args.n else range(2, 9)
        return DEMOS[name](ns)
    return DEMOS[name]()


# -- argument parsing --------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrgap", description="Exact extensions and correlation gaps of set functions."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_cmd(name: str, help_text: str, fn_required: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--fn", required=fn_required, help="set-function JSON (path or inline)")
        p.add_argument("--x", help="marginals: comma list, JSON list, or path")
        p.add_argument("--cap", type=int, help="ground-size limit for the LPs")
        return p

    instance_cmd("eval", "all extension values, LP and closed form")
    instance_cmd("gap", "full gap report")
    instance_cmd("certify", "dual certificates and their verdicts")
    p = instance_cmd("dists", "pairwise independent constructions and diagnostics", fn_required=False)
    p.add_argument("--omega", type=_rational, help="P(empty set) for the three-element family")
    instance_cmd("regions", "region of x per family and subpolytope labels of f", fn_required=False)

    p = sub.add_parser("scan", help="max f_plus/f_pp over generated instances")
    p.add_argument("--generator", help=f"one of {', '.join(gap.GENERATOR_NAMES)}, e.g. coverage-random(5,4)")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--corpus", help="JSON list of {fn, x} instances instead of a generator")

    p = sub.add_parser("demo", help="named reference reproductions")
    p.add_argument("name", choices=sorted([*DEMOS, *DEMO_ALIASES]))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=_rational, default=Fraction(1, 2))
    p.add_argument("--epsilon", help="comma list of epsilons for unbounded-gap")
    return parser


_COMMANDS = {
    "eval": cmd_eval,
    "gap": cmd_gap,
    "certify": cmd_certify,
    "dists": cmd_dists,
    "regions": cmd_regions,
    "scan": cmd_scan,
    "demo": cmd_demo,
}


def _emit(doc: dict, out) -> None:
    out.write(json.dumps(doc, indent=2) + "\n")


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        result = _COMMANDS[args.command](args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(result, gap.ScanResult):
        if args.format == "csv":
            csv.writer(out, lineterminator="\n").writerows(result.csv_rows())
        else:
            _emit(result.to_json(), out)
        return EXIT_FINDING if result.violations else EXIT_OK
    _emit(result, out)
    if args.command == "demo" and not result["pass"]:
        return EXIT_FINDING
    return EXIT_OK


def main() -> None:
    sys.exit(run())
