"""Polar loci equations and degrees of products of polar classes.

A polar locus P_j(Z) of a smooth d-dimensional Z in P^r is cut out by the
maximal minors of the Jacobian of (equations of Z, d-j+2 random linear
forms) that use every linear-form row.  Intersecting independent copies of
such loci and reading off the degree of the resulting scheme gives the
degree of a product of polar classes.
"""

from __future__ import annotations

import hashlib
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product

from .groebner import scheme_stats
from .poly import Ideal, Polynomial, jacobian, minors_with_required_rows

log = logging.getLogger(__name__)

DEFAULT_RETRIES = 3


class GenericityError(RuntimeError):
    """A polar scheme kept the wrong dimension through every retry."""

    def __init__(self, descriptor, observed, expected):
        self.descriptor = descriptor
        self.observed = observed
        self.expected = expected
        super().__init__(
            f"{descriptor.label()}: expected projective dimension {expected}, "
            f"observed {observed.proj_dim} (degree {observed.degree}) on every attempt; "
            "check smoothness/proper intersection of the input or change the seed"
        )


@dataclass(frozen=True, order=True)
class PolarDescriptor:
    """Index of prod_i f_i*[P_{k_i-1}(D_i)]^{a_i} * prod_j [P_j(X)]^{m_j}.

    ``m[j-1]`` is the exponent of [P_j(X)]; ``divisors[i]`` is ``(k_i, a_i)``.
    Unused divisors are stored as ``(1, 0)``.
    """

    m: tuple
    divisors: tuple = ()

    def __post_init__(self):
        n = len(self.m)
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        divs = []
        for k, a in self.divisors:
            if a not in (0, 1):
                raise ValueError("divisor exponent must be 0 or 1")
            if a == 0:
                k = 1
            if not 1 <= k <= max(n, 1):
                raise ValueError(f"divisor polar index k={k} out of range")
            divs.append((int(k), int(a)))
        object.__setattr__(self, "divisors", tuple(divs))
        if any(x < 0 or x > n for x in self.m):
            raise ValueError("polar exponents must lie in [0, n]")
        if self.codim > n and n > 0:
            raise ValueError(f"descriptor codimension {self.codim} exceeds dimension {n}")

    @classmethod
    def empty(cls, n, s=0):
        return cls((0,) * n, ((1, 0),) * s)

    @classmethod
    def polar(cls, n, j, s=0):
        m = [0] * n
        if j:
            m[j - 1] = 1
        return cls(tuple(m), ((1, 0),) * s)

    @property
    def n(self):
        return len(self.m)

    @property
    def codim(self):
        return sum(a * k for k, a in self.divisors) + sum(
            j * mj for j, mj in enumerate(self.m, start=1)
        )

    def is_empty(self):
        return self.codim == 0

    def label(self, names=None):
        names = names or [f"D{i + 1}" for i in range(len(self.divisors))]
        parts = []
        for i, (k, a) in enumerate(self.divisors):
            if a:
                parts.append(f"f_*[P_{k - 1}({names[i]})]")
        for j, mj in enumerate(self.m, start=1):
            if mj:
                parts.append(f"[P_{j}(X)]" + (f"^{mj}" if mj > 1 else ""))
        return " * ".join(parts) if parts else "[P_0(X)]"

    def key(self):
        return f"m={','.join(map(str, self.m))};d={','.join(f'{k}:{a}' for k, a in self.divisors)}"


def full_index_set(n, s=0):
    """Every descriptor of codimension at most n (the exhaustive table)."""
    ms = [
        m
        for m in product(range(n + 1), repeat=n)
        if sum(j * x for j, x in enumerate(m, start=1)) <= n
    ]
    choices = [(1, 0)] + [(k, 1) for k in range(1, n + 1)]
    out = []
    for m in ms:
        base = sum(j * x for j, x in enumerate(m, start=1))
        for divs in product(choices, repeat=s):
            if base + sum(k * a for k, a in divs) <= n:
                out.append(PolarDescriptor(m, divs))
    return sorted(set(out), key=_canonical_order)


def _canonical_order(d):
    return (d.codim, tuple(a for _, a in d.divisors), tuple(k for k, _ in d.divisors), d.m[::-1])


# -- equations ---------------------------------------------------------------


def span_basis(polys):
    """Basis of the linear span of homogeneous polynomials, degree by degree (GF(p))."""
    if not polys:
        return []
    ring = polys[0].ring
    p = ring.modulus
    by_degree = {}
    for f in polys:
        if f:
            by_degree.setdefault(f.total_degree(), []).append(f)
    out = []
    for deg in sorted(by_degree):
        rows = []
        pivots = []
        for f in by_degree[deg]:
            row = dict(f.terms)
            for pe, prow in zip(pivots, rows):
                c = row.get(pe)
                if c:
                    for e, v in prow.items():
                        nv = (row.get(e, 0) - c * v) % p
                        if nv:
                            row[e] = nv
                        else:
                            row.pop(e, None)
            if row:
                pe = max(row)
                inv = pow(row[pe], -1, p)
                row = {e: v * inv % p for e, v in row.items()}
                rows.append(row)
                pivots.append(pe)
        out.extend(Polynomial(ring, r) for r in rows)
    return out


def random_linear_form(ring, rng):
    return ring.linear_form([rng.randrange(ring.modulus) for _ in range(ring.nvars)])


def polar_minors(generators, ring, dim, j, rng):
    """Minors cutting out one polar locus P_j of the d-dimensional scheme."""
    r = ring.nvars - 1
    forms = [random_linear_form(ring, rng) for _ in range(dim - j + 2)]
    rows = list(generators) + forms
    M = jacobian(rows, ring)
    size = r - j + 2
    required = range(len(generators), len(rows))
    if size > M.nrows:
        return []
    return minors_with_required_rows(M, size, required)


def polar_power_equations(ideal, dim, j, m, rng):
    """Ideal of a scheme representing [P_j(Z)]^m for Z = V(ideal) of dimension ``dim``."""
    if j > dim:
        raise ValueError(f"no polar locus P_{j} on a {dim}-dimensional scheme")
    if j < 0 or m < 0:
        raise ValueError("polar index and exponent must be non-negative")
    if j == 0 or m == 0:
        return ideal
    gens = list(ideal.generators)
    extra = []
    for _ in range(m):
        extra.extend(polar_minors(gens, ideal.ring, dim, j, rng))
    return Ideal(ideal.ring, gens + extra, check=False)


def descriptor_rng(seed, descriptor, attempt):
    """Random stream owned by one (descriptor, attempt); independent of scheduling."""
    digest = hashlib.sha256(f"{seed}|{descriptor.key()}|{attempt}".encode()).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


def prepare_divisors(ideal, divisors):
    """Adjoin the variety equations to each divisor ideal and drop linear redundancy."""
    return [Ideal(ideal.ring, span_basis(list(J.generators) + list(ideal.generators))) for J in divisors]


def descriptor_equations(ideal, divisors, desc, dim, rng):
    gens = list(ideal.generators)
    for j, mj in enumerate(desc.m, start=1):
        gens.extend(polar_power_equations(ideal, dim, j, mj, rng).generators[len(ideal) :])
    for J, (k, a) in zip(divisors, desc.divisors):
        if a:
            gens.extend(polar_power_equations(J, dim - 1, k - 1, a, rng).generators)
    return Ideal(ideal.ring, span_basis(gens), check=False)


@dataclass
class Measurement:
    degree: int
    attempts: int


def measure_descriptor(ideal, divisors, desc, seed=0, retries=DEFAULT_RETRIES, dim=None):
    """Degree of the product of polar classes indexed by ``desc``.

    ``divisors`` must already contain the variety equations (see
    :func:`prepare_divisors`).  Retries with fresh linear forms when the
    scheme has the wrong dimension; an empty scheme means the class is zero.
    """
    if dim is None:
        dim = scheme_stats(ideal).proj_dim
    if len(divisors) != len(desc.divisors):
        raise ValueError("descriptor and divisor list disagree on the number of divisors")
    expected = dim - desc.codim
    observed = None
    for attempt in range(max(retries, 1)):
        rng = descriptor_rng(seed, desc, attempt)
        K = descriptor_equations(ideal, divisors, desc, dim, rng)
        observed = scheme_stats(K)
        if observed.proj_dim == expected or observed.empty:
            return Measurement(observed.degree, attempt)
        log.info("%s: dimension %d, expected %d; retrying", desc.label(), observed.proj_dim, expected)
    raise GenericityError(desc, observed, expected)


@dataclass
class DegreeTable:
    """Measured degrees keyed by PolarDescriptor, with provenance."""

    n: int
    s: int
    seed: int
    prime: int
    degrees: dict = field(default_factory=dict)
    retries_used: int = 0

    def __getitem__(self, desc):
        return self.degrees[desc]

    def __contains__(self, desc):
        return desc in self.degrees

    def __len__(self):
        return len(self.degrees)

    def items(self):
        return sorted(self.degrees.items(), key=lambda kv: _canonical_order(kv[0]))


def _measure_job(args):
    ideal, divisors, desc, seed, retries, dim = args
    return measure_descriptor(ideal, divisors, desc, seed, retries, dim)


def polar_product_table(
    ideal, divisors=(), descriptors=None, seed=0, retries=DEFAULT_RETRIES, jobs=1, dim=None
):
    """Measure every requested descriptor (default: the full index set)."""
    if dim is None:
        dim = scheme_stats(ideal).proj_dim
    divisors = prepare_divisors(ideal, divisors)
    s = len(divisors)
    if descriptors is None:
        descriptors = full_index_set(dim, s)
    descriptors = sorted(set(descriptors), key=_canonical_order)
    jobs_args = [(ideal, divisors, d, seed, retries, dim) for d in descriptors]
    if jobs > 1 and len(descriptors) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_measure_job, jobs_args))
    else:
        results = [_measure_job(a) for a in jobs_args]
    table = DegreeTable(dim, s, seed, ideal.ring.modulus)
    for d, res in zip(descriptors, results):
        table.degrees[d] = res.degree
        table.retries_used += res.attempts
    return table


def polar_class_degrees(ideal, seed=0, retries=DEFAULT_RETRIES, dim=None, jobs=1):
    """[deg P_0(X), ..., deg P_n(X)]."""
    if dim is None:
        dim = scheme_stats(ideal).proj_dim
    descs = [PolarDescriptor.polar(dim, j) for j in range(dim + 1)]
    table = polar_product_table(ideal, (), descs, seed, retries, jobs, dim)
    return [table[d] for d in descs]


def ed_degree(polar_degrees):
    """Euclidean distance degree: the sum of the polar degrees."""
    return sum(polar_degrees)


class LinearSpaceError(ValueError):
    """Dual variety statistics are undefined for a linear space."""


def dual_stats(polar_degrees, r):
    """(dim X*, deg X*) from polar degrees of X in P^r via the dual defect."""
    n = len(polar_degrees) - 1
    nonzero = [j for j in range(1, n + 1) if polar_degrees[j]]
    if not nonzero:
        raise LinearSpaceError("all higher polar degrees vanish: X is a linear space")
    top = max(nonzero)
    defect = n - top
    return r - 1 - defect, polar_degrees[top]


def check_proper_intersection(ideal, divisors, dim=None):
    """True iff every k <= n of the divisors meet in codimension k (or not at all)."""
    if dim is None:
        dim = scheme_stats(ideal).proj_dim
    divisors = prepare_divisors(ideal, divisors)
    for size in range(1, min(dim, len(divisors)) + 1):
        for subset in combinations(divisors, size):
            gens = list(ideal.generators)
            for J in subset:
                gens.extend(J.generators)
            st = scheme_stats(Ideal(ideal.ring, span_basis(gens), check=False))
            if not st.empty and st.proj_dim != dim - size:
                return False
    return True
