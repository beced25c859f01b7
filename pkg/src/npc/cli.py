"""Command line interface: ``npc degree|polar|products|euler|ed|dual|fixture``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field

from . import hrr
from .fixtures import FIXTURES, fixture
from .groebner import is_smooth, scheme_stats
from .poly import DEFAULT_PRIME
from .polar import (
    DEFAULT_RETRIES,
    GenericityError,
    LinearSpaceError,
    PolarDescriptor,
    check_proper_intersection,
    dual_stats,
    ed_degree,
    full_index_set,
    polar_product_table,
    prepare_divisors,
)
from .problem import ProblemSpec, SpecError

EXIT_OK = 0
EXIT_INPUT = 3
EXIT_GENERICITY = 4
EXIT_IMPROPER = 5
EXIT_SINGULAR = 6
EXIT_LINEAR = 7


class ImproperIntersectionError(RuntimeError):
    pass


class SingularInputError(RuntimeError):
    pass


@dataclass
class Options:
    seed: int = 0
    prime: int | None = None
    retries: int = DEFAULT_RETRIES
    check_smooth: bool = False
    check_proper: bool = True
    jobs: int = 1
    divisors: list | None = None


@dataclass
class ResultReport:
    """Everything one command computed; serializes to the documented JSON schema."""

    variety: dict | None = None
    divisors: list | None = None
    polar_degrees: list | None = None
    products: list | None = None
    chern_table: dict | None = None
    chi: dict | None = None
    ed_degree: int | None = None
    dual: dict | None = None
    provenance: dict = field(default_factory=dict)

    KEYS = (
        "variety",
        "divisors",
        "polar_degrees",
        "products",
        "chern_table",
        "chi",
        "ed_degree",
        "dual",
        "provenance",
    )

    def to_dict(self):
        return {k: getattr(self, k) for k in self.KEYS if getattr(self, k) is not None}

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(cls.KEYS)
        if unknown:
            raise ValueError(f"unknown report keys {sorted(unknown)}")
        return cls(**data)

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text):
        return cls.from_dict(json.loads(text))

    def chi_polynomial(self):
        names = hrr._param_names(len(self.divisors or []))
        return hrr.ChiPolynomial.from_json(self.chi, names)

    def render(self):
        lines = []
        if self.variety:
            v = self.variety
            lines.append(f"variety: dimension {v['dim']}, degree {v['degree']} in P^{v['ambient']}")
        if self.polar_degrees is not None:
            lines.append("polar degrees:")
            for j, d in enumerate(self.polar_degrees):
                lines.append(f"  deg [P_{j}(X)] = {d}")
        if self.products is not None:
            names = self.divisors or []
            lines.append("products of polar classes:")
            for entry in self.products:
                desc = PolarDescriptor(
                    tuple(entry["m"]), tuple((d["k"], d["a"]) for d in entry["divisors"])
                )
                lines.append(f"  deg {desc.label(names)} = {entry['degree']}")
        if self.chern_table is not None:
            lines.append("Chern and divisor monomials:")
            for k, v in self.chern_table.items():
                lines.append(f"  deg {k} = {v}")
        if self.chi is not None:
            chi = self.chi_polynomial()
            bundle = " + ".join(f"{a}*{d}" for a, d in zip(chi.names, self.divisors))
            lines.append(f"chi(X, {bundle}) = {chi}")
        if self.ed_degree is not None:
            lines.append(f"ED degree: {self.ed_degree}")
        if self.dual is not None:
            lines.append(f"dual variety: dimension {self.dual['dim']}, degree {self.dual['degree']}")
        if self.provenance:
            p = self.provenance
            lines.append(
                f"seed {p['seed']}, prime {p['prime']}, retries used {p['retries_used']}"
            )
        return "\n".join(lines) + "\n"


@dataclass
class Problem:
    spec: ProblemSpec
    X: object
    divisors: list
    names: list
    prime: int
    r: int
    n: int
    degree: int


def load_problem(spec, opts, need_divisors=False):
    prime = opts.prime or spec.prime or DEFAULT_PRIME
    names = opts.divisors if opts.divisors is not None else (list(spec.divisors) if need_divisors else [])
    X, divs, names = spec.ideals(prime, names)
    st = scheme_stats(X)
    if st.empty:
        raise SpecError("the variety equations define the empty scheme")
    if opts.check_smooth:
        if not is_smooth(X, st):
            raise SingularInputError("the variety is singular")
        for nm, J in zip(names, prepare_divisors(X, divs)):
            if not is_smooth(J):
                raise SingularInputError(f"divisor {nm} is singular")
    return Problem(spec, X, divs, names, prime, X.ring.nvars - 1, st.proj_dim, st.degree)


def _base_report(prob):
    return ResultReport(
        variety={"ambient": prob.r, "dim": prob.n, "degree": prob.degree},
        divisors=list(prob.names) or None,
    )


def _provenance(opts, prob, table=None):
    return {
        "seed": opts.seed,
        "prime": prob.prime,
        "retries_used": table.retries_used if table is not None else 0,
    }


def _products_json(table):
    return [
        {
            "m": list(d.m),
            "divisors": [{"k": k, "a": a} for k, a in d.divisors],
            "degree": v,
        }
        for d, v in table.items()
    ]


def _measure(prob, descriptors, opts):
    return polar_product_table(
        prob.X, prob.divisors, descriptors, opts.seed, opts.retries, opts.jobs, prob.n
    )


def _polar_descriptors(n, s):
    return [PolarDescriptor.polar(n, j, s) for j in range(n + 1)]


def _fill_polar(report, table, prob):
    s = len(prob.divisors)
    report.polar_degrees = [table[d] for d in _polar_descriptors(prob.n, s)]
    report.ed_degree = ed_degree(report.polar_degrees)
    try:
        dim, deg = dual_stats(report.polar_degrees, prob.r)
        report.dual = {"dim": dim, "degree": deg}
    except LinearSpaceError:
        report.dual = None


def cmd_degree(spec, opts=None):
    opts = opts or Options()
    prob = load_problem(spec, opts)
    report = _base_report(prob)
    report.provenance = _provenance(opts, prob)
    return report


def cmd_polar(spec, opts=None):
    opts = opts or Options()
    prob = load_problem(spec, opts)
    table = _measure(prob, _polar_descriptors(prob.n, 0), opts)
    report = _base_report(prob)
    report.polar_degrees = [table[d] for d in _polar_descriptors(prob.n, 0)]
    report.provenance = _provenance(opts, prob, table)
    return report


def cmd_ed(spec, opts=None):
    report = cmd_polar(spec, opts)
    report.ed_degree = ed_degree(report.polar_degrees)
    return report


def cmd_dual(spec, opts=None):
    report = cmd_polar(spec, opts)
    dim, deg = dual_stats(report.polar_degrees, report.variety["ambient"])
    report.dual = {"dim": dim, "degree": deg}
    return report


def _check_proper(prob, opts):
    if opts.check_proper and prob.divisors:
        if not check_proper_intersection(prob.X, prob.divisors, prob.n):
            raise ImproperIntersectionError(
                f"divisors {', '.join(prob.names)} do not meet properly"
            )


def cmd_products(spec, opts=None):
    opts = opts or Options()
    prob = load_problem(spec, opts, need_divisors=True)
    _check_proper(prob, opts)
    table = _measure(prob, full_index_set(prob.n, len(prob.divisors)), opts)
    report = _base_report(prob)
    report.products = _products_json(table)
    report.provenance = _provenance(opts, prob, table)
    return report


def euler_descriptors(n, names):
    """Plan for chi, plus polar degrees and the tabulated Chern monomials."""
    s = len(names)
    needed = set(hrr.plan_needed_descriptors(n, s, names))
    needed.update(_polar_descriptors(n, s))
    needed.update(hrr.chern_table_descriptors(n, names))
    return needed


def cmd_euler(spec, opts=None):
    opts = opts or Options()
    prob = load_problem(spec, opts, need_divisors=True)
    if not prob.divisors:
        raise SpecError("euler needs at least one divisor")
    _check_proper(prob, opts)
    table = _measure(prob, euler_descriptors(prob.n, prob.names), opts)
    report = _base_report(prob)
    _fill_polar(report, table, prob)
    report.products = _products_json(table)
    report.chern_table = hrr.chern_table(table, prob.names)
    report.chi = hrr.assemble_chi(table, divisor_names=prob.names).to_json()
    report.provenance = _provenance(opts, prob, table)
    return report


COMMANDS = {
    "degree": cmd_degree,
    "polar": cmd_polar,
    "products": cmd_products,
    "euler": cmd_euler,
    "ed": cmd_ed,
    "dual": cmd_dual,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="npc", description="Degrees of polar classes, ED degree and Euler characteristics."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("spec", help="problem file (JSON)")
        p.add_argument("--divisors", help="comma-separated divisor names (default: all)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--prime", type=int, default=None, help=f"default: file's prime or {DEFAULT_PRIME}")
        p.add_argument("--retries", type=int, default=DEFAULT_RETRIES)
        p.add_argument("--check-smooth", action="store_true")
        p.add_argument("--no-proper-check", action="store_true", help="skip the proper-intersection test")
        p.add_argument("--json", action="store_true", help="print the JSON report")
        p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
        p.add_argument("-v", "--verbose", action="store_true")
    p = sub.add_parser("fixture", help="write a worked-example problem file")
    p.add_argument("name", choices=FIXTURES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "fixture":
        text = fixture(args.name, args.seed, args.prime).dumps()
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    opts = Options(
        seed=args.seed,
        prime=args.prime,
        retries=args.retries,
        check_smooth=args.check_smooth,
        check_proper=not args.no_proper_check,
        jobs=args.jobs,
        divisors=[d.strip() for d in args.divisors.split(",")] if args.divisors else None,
    )
    try:
        spec = ProblemSpec.load(args.spec)
        report = COMMANDS[args.command](spec, opts)
    except (SpecError, OSError, ValueError) as exc:
        if isinstance(exc, LinearSpaceError):
            print(f"npc: {exc}", file=sys.stderr)
            return EXIT_LINEAR
        print(f"npc: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GenericityError as exc:
        print(f"npc: genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except ImproperIntersectionError as exc:
        print(f"npc: {exc}", file=sys.stderr)
        return EXIT_IMPROPER
    except SingularInputError as exc:
        print(f"npc: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    sys.stdout.write(report.dumps() if args.json else report.render())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
