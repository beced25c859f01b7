import random
from itertools import combinations
from math import prod

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from npc.groebner import (
    MonomialOrder,
    SchemeStats,
    eliminate,
    groebner_basis,
    hilbert_numerator,
    is_smooth,
    normal_form,
    scheme_stats,
)
from npc.poly import Ideal, Polynomial, Ring

P = 32003


def ring(nvars, prefix="x"):
    return Ring([f"{prefix}{i}" for i in range(nvars)], P)


def random_form(R, degree, rng):
    terms = []
    for e in _exponents(R.nvars, degree):
        terms.append((e, rng.randrange(P)))
    return Polynomial.from_terms(R, terms)


def _exponents(nv, d):
    if nv == 1:
        yield (d,)
        return
    for k in range(d, -1, -1):
        for rest in _exponents(nv - 1, d - k):
            yield (k,) + rest


def test_monomial_ideal_fixed_point():
    R = ring(3)
    G = groebner_basis(Ideal(R, [R("x0"), R("x1")]))
    assert set(G.generators) == {R("x0"), R("x1")}


def test_containment_reduces_to_zero():
    R = ring(3)
    G = groebner_basis(Ideal(R, [R("x0^2 - x1^2"), R("x0 - x1")]))
    assert list(G.generators) == [R("x0 - x1")]
    assert normal_form(R("x0^2 - x1^2"), G).is_zero()


def test_linear_elimination():
    R = ring(3)
    G = groebner_basis(Ideal(R, [R("x1 - x0"), R("x2 - x0")]), MonomialOrder(3, eliminate=[0]))
    last = [g for g in G.generators if not any(e[0] for e in g.terms)]
    assert R("x1 - x2") in last
    E = eliminate(Ideal(R, [R("x1 - x0"), R("x2 - x0")]), ["x0"])
    assert E.ring.variables == ("x1", "x2")
    assert list(E.generators) == [E.ring("x1 - x2")]


def test_normal_form_examples():
    R = ring(3)
    G = groebner_basis(Ideal(R, [R("x0")]))
    assert normal_form(R("x0^2"), G).is_zero()
    assert normal_form(R("x1"), G) == R("x1")
    assert normal_form(R.zero(), G).is_zero()


def test_unit_ideal():
    R = ring(3)
    G = groebner_basis(Ideal(R, [R("x0 - x1 + 1")], check=False))
    assert groebner_basis(Ideal(R, [R.one()], check=False)).is_unit()
    assert not G.is_unit()


def test_reduced_basis_properties():
    rng = random.Random(3)
    R = ring(4)
    I = Ideal(R, [random_form(R, 2, rng) for _ in range(3)])
    G = groebner_basis(I)
    lms = G.leading_monomials()
    for g, lm in zip(G.generators, lms):
        assert g.terms[lm] == 1
        for other in lms:
            if other != lm:
                assert not any(all(a <= b for a, b in zip(other, e)) for e in g.terms)
    # S-pairs reduce to zero
    for (f, lf), (g, lg) in combinations(list(zip(G.generators, lms)), 2):
        l = tuple(max(a, b) for a, b in zip(lf, lg))
        mf = Polynomial(R, {tuple(a - b for a, b in zip(l, lf)): 1})
        mg = Polynomial(R, {tuple(a - b for a, b in zip(l, lg)): 1})
        assert normal_form(f * mf - g * mg, G).is_zero()
    for f in I.generators:
        assert normal_form(f, G).is_zero()


# -- Hilbert series -------------------------------------------------------------


def test_hilbert_examples():
    assert hilbert_numerator([], 2) == [1]
    assert hilbert_numerator([(1, 0)], 2) == [1, -1]
    assert hilbert_numerator([(2, 0), (1, 1)], 2) == [1, 0, -2, 1]


def inclusion_exclusion(gens, nv):
    """1 - sum t^deg(g) + sum t^deg lcm(g,h) - ... over all subsets."""
    out = {}
    for k in range(len(gens) + 1):
        for sub in combinations(gens, k):
            l = tuple(max((g[i] for g in sub), default=0) for i in range(nv))
            out[sum(l)] = out.get(sum(l), 0) + (-1) ** k
    deg = max(out)
    coeffs = [out.get(i, 0) for i in range(deg + 1)]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@given(st.lists(st.tuples(*[st.integers(0, 3)] * 3).filter(any), min_size=0, max_size=3))
@settings(max_examples=150, deadline=None)
def test_hilbert_matches_inclusion_exclusion(gens):
    N = hilbert_numerator(gens, 3)
    assert N == inclusion_exclusion(gens, 3)
    if gens:
        # nonempty projective scheme unless the cone is a point
        assert sum(N) >= 0


def test_scheme_stats_trivial():
    for r in (1, 3, 4):
        R = ring(r + 1)
        assert scheme_stats(Ideal(R, [])) == SchemeStats(r, 1)
        assert scheme_stats(Ideal(R, list(R.gens))) == SchemeStats(-1, 0)


def test_two_quadrics_in_p4():
    rng = random.Random(11)
    R = ring(5)
    assert scheme_stats(Ideal(R, [random_form(R, 2, rng), random_form(R, 2, rng)])) == SchemeStats(2, 4)


def twisted_cubic_slice_oracle(h):
    """Number of points of a hyperplane section of the twisted cubic (distinct roots)."""
    u = sympy.symbols("u")
    f = sympy.Poly(sum(c * u ** (3 - i) for i, c in enumerate(h)), u, modulus=P)
    # roots over the algebraic closure, counted without multiplicity
    sqf = sympy.Poly(sympy.gcd(f, f.diff(u)), u, modulus=P)
    return f.degree() - sqf.degree()


def test_twisted_cubic_degree_against_slice_oracle():
    rng = random.Random(5)
    h = [rng.randrange(1, P) for _ in range(4)]
    assert twisted_cubic_slice_oracle(h) == 3
    R = ring(4)
    I = Ideal(R, [R("x0*x2 - x1^2"), R("x0*x3 - x1*x2"), R("x1*x3 - x2^2")])
    assert scheme_stats(I) == SchemeStats(1, 3)
    sliced = I + [R.linear_form(h)]
    assert scheme_stats(sliced) == SchemeStats(0, 3)


@pytest.mark.parametrize("r, d", [(2, 1), (2, 3), (3, 2), (3, 4), (4, 3), (5, 2)])
def test_hypersurface_degree(r, d):
    rng = random.Random(r * 10 + d)
    R = ring(r + 1)
    assert scheme_stats(Ideal(R, [random_form(R, d, rng)])) == SchemeStats(r - 1, d)


@pytest.mark.parametrize("r, degrees", [(3, (2, 2)), (3, (2, 3)), (4, (2, 2, 2)), (4, (3, 2)), (5, (2, 2, 2))])
def test_bezout(r, degrees):
    rng = random.Random(sum(degrees) + r)
    R = ring(r + 1)
    I = Ideal(R, [random_form(R, d, rng) for d in degrees])
    assert scheme_stats(I) == SchemeStats(r - len(degrees), prod(degrees))


def random_change(R, rng):
    while True:
        rows = [[rng.randrange(P) for _ in range(R.nvars)] for _ in range(R.nvars)]
        if sympy.Matrix(rows).det() % P:
            return [R.linear_form(row) for row in rows]


def test_stats_invariant_under_coordinate_change():
    rng = random.Random(9)
    R = ring(4)
    I = Ideal(R, [R("x0*x2 - x1^2"), R("x0*x3 - x1*x2"), R("x1*x3 - x2^2")])
    base = scheme_stats(I)
    for _ in range(3):
        images = random_change(R, rng)
        moved = Ideal(R, [g.substitute(images) for g in I.generators])
        assert scheme_stats(moved) == base


def test_eliminate_drops_variables():
    R = Ring(["s", "t", "x0", "x1", "x2"], P)
    s, t, x0, x1, x2 = R.gens
    graph = Ideal(R, [x0 - s * s, x1 - s * t, x2 - t * t], check=False)
    E = eliminate(graph, ["s", "t"])
    assert E.ring.variables == ("x0", "x1", "x2")
    assert list(E.generators) == [E.ring("x1^2 - x0*x2")]
    assert scheme_stats(Ideal(E.ring, E.generators)) == SchemeStats(1, 2)


def test_veronese_projection_elimination():
    R = Ring(["u", "v", "w", "x0", "x1", "x2", "x3", "x4"], P)
    u, v, w = R.gens[:3]
    y = R.gens[3:]
    graph = [y[0] - (u * u + w * w), y[1] - (v * v + w * w), y[2] - u * v, y[3] - u * w, y[4] - v * w]
    E = eliminate(Ideal(R, graph, check=False), ["u", "v", "w"])
    assert E.ring.variables == ("x0", "x1", "x2", "x3", "x4")
    assert scheme_stats(Ideal(E.ring, E.generators)) == SchemeStats(2, 4)


def test_segre_elimination():
    R = Ring(["s0", "s1", "t0", "t1", "t2"] + [f"x{i}" for i in range(6)], P)
    s, t, x = R.gens[:2], R.gens[2:5], R.gens[5:]
    graph = [x[3 * i + j] - s[i] * t[j] for i in range(2) for j in range(3)]
    E = eliminate(Ideal(R, graph, check=False), ["s0", "s1", "t0", "t1", "t2"])
    assert len(E) == 3 and all(g.total_degree() == 2 for g in E.generators)
    assert scheme_stats(Ideal(E.ring, E.generators)) == SchemeStats(3, 3)


def test_is_smooth():
    R2 = ring(3)
    assert is_smooth(Ideal(R2, []))
    assert not is_smooth(Ideal(R2, [R2("x0*x1")]))
    rng = random.Random(1)
    R = ring(5)
    assert is_smooth(Ideal(R, [random_form(R, 2, rng), random_form(R, 2, rng)]))
    # a quadric cone is singular at its vertex
    R3 = ring(4)
    assert not is_smooth(Ideal(R3, [R3("x0*x1 - x2^2")]))
