"""Generators for the four worked examples (seeded random coefficients).

quartic-surface      two quadrics through a rational normal quartic curve D in P^4
veronese-projection  projected Veronese surface in P^4, D a general cubic, E a hyperplane section
ci-threefold         (2,2) complete intersection in P^5, D cut by one more quadric
segre-p1p2           P^1 x P^2 in P^5 (general linear coordinates), D of type (1,2)

The last two with elimination produce equations valid modulo the chosen
prime only; the prime is recorded in the problem file.
"""

from __future__ import annotations

import random
from itertools import combinations

from .groebner import eliminate
from .poly import DEFAULT_PRIME, Ideal, Polynomial, Ring
from .problem import ProblemSpec

FIXTURES = ("quartic-surface", "veronese-projection", "ci-threefold", "segre-p1p2")
COEFF_RANGE = 50


def _coeff(rng):
    c = 0
    while c == 0:
        c = rng.randint(-COEFF_RANGE, COEFF_RANGE)
    return c


def _linear_form(ring, rng, variables=None):
    variables = range(ring.nvars) if variables is None else variables
    out = ring.zero()
    for i in variables:
        out = out + ring.gen(i).scale(_coeff(rng))
    return out


def _combination(polys, rng):
    out = polys[0].ring.zero()
    for f in polys:
        out = out + f.scale(_coeff(rng))
    return out


def _forms(ring, variables, degree, rng):
    """Random form of the given degree in the listed variable indices."""
    out = {}
    for combo in _monomials(len(variables), degree):
        e = [0] * ring.nvars
        for v, k in zip(variables, combo):
            e[v] = k
        out[tuple(e)] = _coeff(rng)
    return Polynomial.from_terms(ring, out.items())


def _monomials(nv, degree):
    if nv == 1:
        yield (degree,)
        return
    for k in range(degree, -1, -1):
        for rest in _monomials(nv - 1, degree - k):
            yield (k,) + rest


def _two_by_two_minors(M):
    cols = len(M[0])
    return [M[0][a] * M[1][b] - M[0][b] * M[1][a] for a, b in combinations(range(cols), 2)]


def quartic_surface(seed):
    rng = random.Random(seed)
    ring = Ring([f"x{i}" for i in range(5)])
    M = [[_linear_form(ring, rng) for _ in range(4)] for _ in range(2)]
    J = _two_by_two_minors(M)
    I = [_combination(J, rng) for _ in range(2)]
    return ProblemSpec(
        name="quartic-surface",
        variables=list(ring.variables),
        variety=[str(g) for g in I],
        divisors={"D": [str(g) for g in J]},
    )


def ci_threefold(seed):
    rng = random.Random(seed)
    ring = Ring([f"x{i}" for i in range(6)])
    J = [_forms(ring, range(6), 2, rng) for _ in range(3)]
    I = [_combination(J, rng) for _ in range(2)]
    return ProblemSpec(
        name="ci-threefold",
        variables=list(ring.variables),
        variety=[str(g) for g in I],
        divisors={"D": [str(g) for g in J]},
    )


def _graph_image(ring, graph, extra, source):
    return eliminate(Ideal(ring, graph + extra, check=False), source)


def veronese_projection(seed, prime=DEFAULT_PRIME):
    rng = random.Random(seed)
    target = [f"x{i}" for i in range(5)]
    ring = Ring(["u", "v", "w"] + target, prime)
    u, v, w = ring.gens[:3]
    y = ring.gens[3:]
    # (u^2, v^2, w^2, uv, uw, vw) followed by (a,b,c,d,e,f) -> (a+c, b+c, d, e, f)
    graph = [y[0] - (u * u + w * w), y[1] - (v * v + w * w), y[2] - u * v, y[3] - u * w, y[4] - v * w]
    cubic = _forms(ring, range(3), 3, rng)
    I = _graph_image(ring, graph, [], ["u", "v", "w"])
    J = _graph_image(ring, graph, [cubic], ["u", "v", "w"])
    sub = I.ring
    E = [_linear_form(sub, rng)]
    return ProblemSpec(
        name="veronese-projection",
        variables=target,
        variety=[str(g) for g in I],
        divisors={"D": [str(g) for g in J], "E": [str(g) for g in E]},
        prime=prime,
    )


def segre_p1p2(seed, prime=DEFAULT_PRIME):
    rng = random.Random(seed)
    target = [f"x{i}" for i in range(6)]
    source = ["s0", "s1", "t0", "t1", "t2"]
    ring = Ring(source + target, prime)
    s = ring.gens[:2]
    t = ring.gens[2:5]
    xs = list(range(5, 11))
    M = [[_linear_form(ring, rng, xs) for _ in range(3)] for _ in range(2)]
    X = _two_by_two_minors(M)
    graph = [M[i][j] - s[i] * t[j] for i in range(2) for j in range(3)]
    # type (1,2): linear in s, quadratic in t
    p = ring.zero()
    for i in range(2):
        p = p + s[i] * _forms(ring, range(2, 5), 2, rng)
    J = _graph_image(ring, graph, [p], source)
    sub = J.ring
    keep = [ring.index(v) for v in target]
    I = [Polynomial(sub, {tuple(e[i] for i in keep): c for e, c in g.terms.items()}) for g in X]
    return ProblemSpec(
        name="segre-p1p2",
        variables=target,
        variety=[str(g) for g in I],
        divisors={"D": [str(g) for g in J]},
        prime=prime,
    )


def fixture(name, seed=0, prime=DEFAULT_PRIME):
    """ProblemSpec for one of :data:`FIXTURES`."""
    if name == "quartic-surface":
        return quartic_surface(seed)
    if name == "ci-threefold":
        return ci_threefold(seed)
    if name == "veronese-projection":
        return veronese_projection(seed, prime)
    if name == "segre-p1p2":
        return segre_p1p2(seed, prime)
    raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
