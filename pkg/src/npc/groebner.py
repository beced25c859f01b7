"""Buchberger's algorithm over GF(p), Hilbert series and degree extraction.

Everything here works on raw term dicts ``{exponent tuple: int}`` internally;
the public functions take and return :class:`~npc.poly.Ideal` objects.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations

from .poly import Ideal, Polynomial, jacobian, minors_with_required_rows


class MonomialOrder:
    """Degrevlex, or a two-block elimination order (degrevlex inside each block).

    ``eliminate`` lists variable indices forming the first (larger) block.
    """

    def __init__(self, nvars, eliminate=()):
        self.nvars = nvars
        self.eliminate = tuple(sorted(set(eliminate)))
        rest = [i for i in range(nvars) if i not in self.eliminate]
        self.blocks = [list(self.eliminate), rest] if self.eliminate else [rest]

    @classmethod
    def degrevlex(cls, nvars):
        return cls(nvars)

    @property
    def tag(self):
        return f"elimination-block({len(self.eliminate)})" if self.eliminate else "degrevlex"

    def key(self, e):
        """Larger key means larger monomial."""
        out = []
        for block in self.blocks:
            out.append(sum(e[i] for i in block))
            out.extend(-e[i] for i in reversed(block))
        return tuple(out)

    def __repr__(self):
        return f"MonomialOrder({self.tag})"


@dataclass(frozen=True)
class SchemeStats:
    """Projective dimension and degree of a scheme; (-1, 0) when empty."""

    proj_dim: int
    degree: int

    @property
    def empty(self):
        return self.proj_dim < 0


class GroebnerBasis(Ideal):
    """Reduced, monic Gröbner basis together with its monomial order."""

    def __init__(self, ring, generators, order):
        super().__init__(ring, generators, check=False)
        self.order = order

    def leading_monomials(self):
        return [max(g.terms, key=self.order.key) for g in self.generators]

    def is_unit(self):
        return any(sum(m) == 0 for m in self.leading_monomials())


# -- low level -------------------------------------------------------------


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _is_constant(f):
    return len(f) == 1 and not any(next(iter(f)))


def _make_monic(f, lm, p):
    inv = pow(f[lm], -1, p)
    if inv == 1:
        return f
    return {e: c * inv % p for e, c in f.items()}


class _Reducer:
    """Multivariate division by a growing list of monic polynomials."""

    def __init__(self, p, order):
        self.p = p
        self.key = order.key
        self.lms = []
        self.polys = []
        self.sugars = []
        self.active = []

    def neg_key(self, e):
        return tuple(-x for x in self.key(e))

    def find(self, e):
        for idx in self.active:
            if _divides(self.lms[idx], e):
                return idx
        return None

    def reduce(self, f, sugar=0, full=True):
        """Return (remainder, sugar).  ``full=False`` stops at an irreducible lead."""
        p = self.p
        f = dict(f)
        heap = [(self.neg_key(e), e) for e in f]
        heapq.heapify(heap)
        rem = {}
        while heap:
            _, e = heapq.heappop(heap)
            c = f.get(e)
            if c is None:
                continue
            idx = self.find(e)
            if idx is None:
                rem[e] = f.pop(e)
                if not full:
                    rem.update(f)
                    return rem, sugar
                continue
            lm = self.lms[idx]
            q = tuple(a - b for a, b in zip(e, lm))
            sugar = max(sugar, sum(q) + self.sugars[idx])
            for ge, gc in self.polys[idx].items():
                ne = tuple(a + b for a, b in zip(ge, q))
                old = f.get(ne)
                v = ((old or 0) - c * gc) % p
                if v:
                    if old is None:
                        heapq.heappush(heap, (self.neg_key(ne), ne))
                    f[ne] = v
                elif old is not None:
                    del f[ne]
        return rem, sugar


def _spoly(f, lmf, g, lmg, p):
    lcm = _lcm(lmf, lmg)
    qf = tuple(a - b for a, b in zip(lcm, lmf))
    qg = tuple(a - b for a, b in zip(lcm, lmg))
    out = {}
    for e, c in f.items():
        ne = tuple(a + b for a, b in zip(e, qf))
        out[ne] = c
    for e, c in g.items():
        ne = tuple(a + b for a, b in zip(e, qg))
        v = (out.get(ne, 0) - c) % p
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return out


def _buchberger(polys, p, order):
    """Reduced monic Gröbner basis of a list of term dicts."""
    key = order.key
    red = _Reducer(p, order)
    pairs = []  # (sugar, lcm key, i, j, lcm)

    def add(f, sugar):
        lm = max(f, key=key)
        f = _make_monic(f, lm, p)
        h = len(red.polys)
        red.lms.append(lm)
        red.polys.append(f)
        red.sugars.append(sugar)
        # Gebauer-Moeller update
        new = []
        for g in red.active:
            lg = red.lms[g]
            new.append((g, _lcm(lm, lg), _coprime(lm, lg)))
        kept = []
        for i, (g, l, cop) in enumerate(new):
            if cop:
                kept.append((g, l, cop))
                continue
            redundant = False
            for j, (g2, l2, _) in enumerate(new):
                if j != i and _divides(l2, l) and (l2 != l or j < i):
                    redundant = True
                    break
            if not redundant:
                for g2, l2, _ in kept:
                    if _divides(l2, l):
                        redundant = True
                        break
            if not redundant:
                kept.append((g, l, cop))
        survivors = []
        for s, k, i, j, l in pairs:
            if (
                _divides(lm, l)
                and _lcm(red.lms[i], lm) != l
                and _lcm(red.lms[j], lm) != l
            ):
                continue
            survivors.append((s, k, i, j, l))
        pairs[:] = survivors
        for g, l, cop in kept:
            if cop:
                continue
            s = max(
                sugar + sum(l) - sum(lm),
                red.sugars[g] + sum(l) - sum(red.lms[g]),
            )
            pairs.append((s, key(l), g, h, l))
        red.active = [g for g in red.active if not _divides(lm, red.lms[g])]
        red.active.append(h)

    for f in sorted(polys, key=lambda f: key(max(f, key=key))):
        if not f:
            continue
        r, s = red.reduce(f, sugar=max(sum(e) for e in f))
        if r:
            if _is_constant(r):
                return [{(0,) * order.nvars: 1}]
            add(r, s)

    while pairs:
        best = min(range(len(pairs)), key=lambda t: (pairs[t][0], pairs[t][1]))
        s, _, i, j, _ = pairs.pop(best)
        sp = _spoly(red.polys[i], red.lms[i], red.polys[j], red.lms[j], p)
        r, s = red.reduce(sp, sugar=s)
        if r:
            if _is_constant(r):
                return [{(0,) * order.nvars: 1}]
            add(r, s)

    return _interreduce([red.polys[g] for g in red.active], p, order)


def _interreduce(polys, p, order):
    key = order.key
    polys = sorted(polys, key=lambda f: key(max(f, key=key)))
    lms = [max(f, key=key) for f in polys]
    minimal = []
    for i, (f, lm) in enumerate(zip(polys, lms)):
        if any(_divides(lms[j], lm) for j in range(len(polys)) if j != i and (lms[j] != lm or j < i)):
            continue
        minimal.append(f)
    out = []
    for i, f in enumerate(minimal):
        red = _Reducer(p, order)
        for j, g in enumerate(minimal):
            if j != i:
                red.lms.append(max(g, key=key))
                red.polys.append(g)
                red.sugars.append(0)
                red.active.append(len(red.polys) - 1)
        r, _ = red.reduce(f)
        lm = max(r, key=key)
        out.append(_make_monic(r, lm, p))
    out.sort(key=lambda f: key(max(f, key=key)))
    return out


def _require_prime_field(ideal):
    if ideal.ring.modulus is None:
        raise ValueError("Gröbner computations need a prime-field ring; use reduce_mod_p")
    return ideal.ring.modulus


# -- public API ------------------------------------------------------------


def groebner_basis(ideal, order=None):
    """Reduced Gröbner basis of ``ideal`` (degrevlex unless ``order`` given)."""
    p = _require_prime_field(ideal)
    ring = ideal.ring
    if order is None:
        order = MonomialOrder.degrevlex(ring.nvars)
    gb = _buchberger([g.terms for g in ideal.generators], p, order)
    return GroebnerBasis(ring, [Polynomial(ring, f) for f in gb], order)


def normal_form(f, basis):
    """Remainder of ``f`` on division by a Gröbner basis."""
    p = _require_prime_field(basis)
    red = _Reducer(p, basis.order)
    for g in basis.generators:
        red.lms.append(max(g.terms, key=basis.order.key))
        red.polys.append(_make_monic(g.terms, red.lms[-1], p))
        red.sugars.append(0)
        red.active.append(len(red.polys) - 1)
    r, _ = red.reduce(f.terms)
    return Polynomial(f.ring, r)


def eliminate(ideal, variables):
    """Generators of ``ideal`` intersected with the subring omitting ``variables``.

    The result lives in the ring on the remaining variables.
    """
    ring = ideal.ring
    idx = sorted(ring.index(v) if isinstance(v, str) else v for v in variables)
    order = MonomialOrder(ring.nvars, eliminate=idx)
    gb = groebner_basis(ideal, order)
    keep = [i for i in range(ring.nvars) if i not in idx]
    sub = ring.subring(ring.variables[i] for i in keep)
    gens = []
    for g in gb.generators:
        if all(not any(e[i] for i in idx) for e in g.terms):
            gens.append(Polynomial(sub, {tuple(e[i] for i in keep): c for e, c in g.terms.items()}))
    return Ideal(sub, gens, check=False)


# -- Hilbert series --------------------------------------------------------


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


def _trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def minimalize(monomials):
    """Minimal generators of the monomial ideal spanned by ``monomials``."""
    mons = sorted(set(monomials), key=sum)
    out = []
    for m in mons:
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return out


def _one_minus_t_pow(d):
    out = [0] * (d + 1)
    out[0] += 1
    out[d] -= 1
    return out


def _hilbert(gens):
    if not gens:
        return [1]
    if len(gens) == 1:
        return _one_minus_t_pow(sum(gens[0]))
    mixed = [g for g in gens if sum(1 for x in g if x) > 1]
    if not mixed:
        # distinct pure powers form a regular sequence
        out = [1]
        for g in gens:
            out = _poly_mul(out, _one_minus_t_pow(sum(g)))
        return out
    nv = len(gens[0])
    counts = [sum(1 for g in mixed if g[v]) for v in range(nv)]
    v = max(range(nv), key=lambda i: counts[i])
    exps = sorted(g[v] for g in mixed if g[v])
    k = exps[len(exps) // 2]
    pivot = tuple(k if i == v else 0 for i in range(nv))
    # H(I) = H(I + (pivot)) + t^k H(I : pivot)
    plus = minimalize(gens + [pivot])
    colon = minimalize([tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens])
    shifted = [0] * k + _hilbert(colon)
    return _poly_add(_hilbert(plus), shifted)


def hilbert_numerator(monomials, nvars=None):
    """Numerator N(t) (coefficient list) of the Hilbert series N(t)/(1-t)^n of S/I."""
    monomials = [tuple(m) for m in monomials]
    if nvars is not None and any(len(m) != nvars for m in monomials):
        raise ValueError("monomial length does not match nvars")
    if any(sum(m) == 0 for m in monomials):
        return [0]
    return _trim(_hilbert(minimalize(monomials)))


def stats_from_numerator(numerator, nvars):
    """Cancel powers of (1-t); return SchemeStats for the projective scheme."""
    q = _trim(numerator)
    if not any(q):
        return SchemeStats(-1, 0)
    k = 0
    while sum(q) == 0:
        # synthetic division by (1 - t)
        out = []
        acc = 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = _trim(out)
        k += 1
    krull = nvars - k
    if krull <= 0:
        return SchemeStats(-1, 0)
    return SchemeStats(krull - 1, sum(q))


def scheme_stats(ideal):
    """(projective dimension, degree) of the scheme defined by ``ideal``."""
    gb = groebner_basis(ideal)
    return stats_from_basis(gb)


def stats_from_basis(gb):
    nv = gb.ring.nvars
    if gb.is_unit():
        return SchemeStats(-1, 0)
    return stats_from_numerator(hilbert_numerator(gb.leading_monomials(), nv), nv)


def is_smooth(ideal, stats=None):
    """True iff adjoining the codim-size Jacobian minors gives the empty scheme."""
    if stats is None:
        stats = scheme_stats(ideal)
    if stats.empty:
        raise ValueError("the ideal defines the empty scheme")
    r = ideal.ring.nvars - 1
    c = r - stats.proj_dim
    if c == 0:
        return True
    J = jacobian(list(ideal.generators), ideal.ring)
    if c > J.nrows:
        return False
    minors = minors_with_required_rows(J, c, ())
    return scheme_stats(ideal + minors).empty
