"""Intersection-class algebra for the Riemann-Roch side of the computation.

Classes are truncated polynomials in weighted symbols

    H (1), c_j (j), D_i (1), d_{j,i} (j), P_j (j), Q_{l,i} (l + 1)

where c_j are Chern classes of X, D_i divisor classes, d_{j,i} the
pushforwards of c_{j-1}(T_{D_i}), P_j = [P_j(X)] and Q_{l,i} = f_i*[P_l(D_i)].
Coefficients are rational polynomials in one weight-0 parameter a_i per
divisor; we store those parameters as extra exponent slots.
"""

from __future__ import annotations

import string
from itertools import product
from fractions import Fraction
from math import comb, factorial

from .polar import PolarDescriptor


class ClassRing:
    """Symbol table for classes on an n-dimensional X with named divisors."""

    def __init__(self, n, divisor_names=("D",)):
        if n < 0:
            raise ValueError("dimension must be non-negative")
        self.n = n
        self.divisor_names = tuple(divisor_names)
        s = len(self.divisor_names)
        names, weights = ["H"], [1]
        names += [f"c{j}" for j in range(1, n + 1)]
        weights += list(range(1, n + 1))
        for N in self.divisor_names:
            names.append(N)
            weights.append(1)
        for N in self.divisor_names:
            names += [f"d{j}_{N}" for j in range(1, n + 1)]
            weights += list(range(1, n + 1))
        names += [f"P{j}" for j in range(1, n + 1)]
        weights += list(range(1, n + 1))
        for N in self.divisor_names:
            names += [f"f_*[P_{l}({N})]" for l in range(n)]
            weights += [l + 1 for l in range(n)]
        self.param_names = tuple(_param_names(s))
        names += self.param_names
        weights += [0] * s
        self.names = tuple(names)
        self.weights = tuple(weights)
        self._index = {nm: i for i, nm in enumerate(names)}
        if len(self._index) != len(names):
            raise ValueError("divisor names clash with class symbols")
        self.size = len(names)

    @property
    def s(self):
        return len(self.divisor_names)

    def index(self, name):
        return self._index[name]

    # symbol indices
    def H(self):
        return 0

    def c(self, j):
        return j

    def D(self, i):
        return 1 + self.n + i

    def d(self, j, i):
        return 1 + self.n + self.s + i * self.n + (j - 1)

    def P(self, j):
        return 1 + self.n + self.s + self.s * self.n + (j - 1)

    def Q(self, l, i):
        return 1 + 2 * self.n + self.s + self.s * self.n + i * self.n + l

    def param(self, i):
        return self.size - self.s + i

    def weight(self, e):
        return sum(w * x for w, x in zip(self.weights, e))

    def symbol(self, idx, power=1, coeff=1):
        e = [0] * self.size
        e[idx] = power
        return GradedClass(self, {tuple(e): Fraction(coeff)})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = Fraction(c)
        return GradedClass(self, {(0,) * self.size: c} if c else {})

    def zero(self):
        return GradedClass(self, {})

    def __eq__(self, other):
        return isinstance(other, ClassRing) and (self.n, self.divisor_names) == (
            other.n,
            other.divisor_names,
        )

    def __hash__(self):
        return hash((self.n, self.divisor_names))


def _param_names(s):
    if s <= 26:
        return list(string.ascii_lowercase[:s])
    return [f"a{i + 1}" for i in range(s)]


class GradedClass:
    """Truncated (weight <= n) polynomial in class symbols with rational coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        n = ring.n
        self.terms = {e: c for e, c in terms.items() if c and ring.weight(e) <= n}

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return GradedClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        ring = self.ring
        n = ring.n
        out = {}
        lw = {e: ring.weight(e) for e in other.terms}
        for e1, c1 in self.terms.items():
            w1 = ring.weight(e1)
            for e2, c2 in other.terms.items():
                if w1 + lw[e2] > n:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return GradedClass(ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, c):
        c = Fraction(c)
        return GradedClass(self.ring, {e: v / c for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        return isinstance(other, GradedClass) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _lift(self, other):
        if isinstance(other, GradedClass):
            if other.ring != self.ring:
                raise ValueError("classes from different rings")
            return other
        return self.ring.constant(other)

    def is_zero(self):
        return not self.terms

    def part(self, w):
        """Weight-w homogeneous piece."""
        return GradedClass(self.ring, {e: c for e, c in self.terms.items() if self.ring.weight(e) == w})

    def truncate(self, w):
        return GradedClass(self.ring, {e: c for e, c in self.terms.items() if self.ring.weight(e) <= w})

    def uses(self, indices):
        return any(e[i] for e in self.terms for i in indices)

    def substitute_powers(self, index, image):
        """Replace each ``symbol**k`` (k >= 1) by ``image(k)``."""
        out = self.ring.zero()
        cache = {}
        for e, c in self.terms.items():
            k = e[index]
            if not k:
                out = out + GradedClass(self.ring, {e: c})
                continue
            if k not in cache:
                cache[k] = image(k)
            rest = e[:index] + (0,) + e[index + 1 :]
            out = out + GradedClass(self.ring, {rest: c}) * cache[k]
        return out

    def substitute(self, index, image):
        """Replace a symbol by a class (ordinary ring substitution)."""
        return self.substitute_powers(index, lambda k: image**k)

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (self.ring.weight(t[0]), t[0]))
        out = []
        for e, c in items:
            mono = monomial_name(self.ring, e)
            out.append(f"{c}*{mono}" if mono != "1" else str(c))
        return " + ".join(out)

    __repr__ = __str__


def monomial_name(ring, e):
    parts = []
    for i, k in enumerate(e):
        if k:
            parts.append(ring.names[i] if k == 1 else f"{ring.names[i]}^{k}")
    return "*".join(parts) if parts else "1"


# -- Todd class ---------------------------------------------------------------


def _series_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def todd_log_coefficients(n):
    """Coefficients lambda_1..lambda_n of log(t / (1 - e^{-t}))."""
    # g(t) = (1 - e^{-t}) / t = sum (-1)^k t^k / (k+1)!
    u = [Fraction(0)] + [Fraction((-1) ** k, factorial(k + 1)) for k in range(1, n + 1)]
    log_g = [Fraction(0)] * (n + 1)
    power = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        power = _series_mul(power, u, n)
        for i in range(n + 1):
            log_g[i] += Fraction((-1) ** (k + 1), k) * power[i]
    return [-x for x in log_g]


def power_sums(ring):
    """Newton power sums p_1..p_n in the Chern classes."""
    n = ring.n
    c = [ring.one()] + [ring.symbol(ring.c(j)) for j in range(1, n + 1)]
    p = [None]
    for m in range(1, n + 1):
        acc = c[m] * ((-1) ** (m - 1) * m)
        for i in range(1, m):
            acc = acc + c[i] * p[m - i] * ((-1) ** (i - 1))
        p.append(acc)
    return p


def _exp(u, n):
    out = u.ring.one()
    term = u.ring.one()
    for k in range(1, n + 1):
        term = term * u / k
        out = out + term
    return out


def todd_class(n, ring=None):
    """td(X) = T_0 + ... + T_n as a class in c_1..c_n."""
    ring = ring or ClassRing(n, ())
    lam = todd_log_coefficients(ring.n)
    p = power_sums(ring)
    log_td = ring.zero()
    for m in range(1, ring.n + 1):
        log_td = log_td + p[m] * lam[m]
    return _exp(log_td, ring.n)


def chern_character(n=None, s=None, ring=None):
    """sum_k (a_1 D_1 + ... + a_s D_s)^k / k! truncated at weight n."""
    if ring is None:
        ring = ClassRing(n, _names(s, None))
    L = ring.zero()
    for i in range(ring.s):
        L = L + ring.symbol(ring.param(i)) * ring.symbol(ring.D(i))
    return _exp(L, ring.n)


# -- adjunction and polar substitution ---------------------------------------


def divisor_power_image(ring, i):
    """k -> expression of D_i^k linear in d_{1,i}..d_{k,i} (adjunction recursion)."""
    cache = {}

    def image(k):
        if k in cache:
            return cache[k]
        if k == 1:
            val = ring.symbol(ring.d(1, i))
        elif k > ring.n:
            val = ring.zero()
        else:
            acc = ring.symbol(ring.d(k, i))
            for j in range(1, k):
                acc = acc - ring.symbol(ring.c(k - j)) * image(j) * ((-1) ** (j + 1))
            val = acc * ((-1) ** (k + 1))
        cache[k] = val
        return val

    return image


def eliminate_divisor_powers(g):
    """Rewrite every D_i^k via adjunction; the result has no D symbols."""
    ring = g.ring
    d_syms = [ring.d(j, i) for i in range(ring.s) for j in range(1, ring.n + 1)]
    if g.uses(d_syms):
        raise ValueError("input already contains pushed-forward Chern classes")
    for i in range(ring.s):
        g = g.substitute_powers(ring.D(i), divisor_power_image(ring, i))
    return g


def adjunction_expansion(ring, k, i):
    """d_{k,i} = sum_{j=1}^k (-1)^{j+1} D_i^j c_{k-j} (the inverse direction)."""
    out = ring.zero()
    for j in range(1, k + 1):
        c = ring.one() if k == j else ring.symbol(ring.c(k - j))
        out = out + ring.symbol(ring.D(i), j) * c * ((-1) ** (j + 1))
    return out


def _h(ring, k):
    return ring.symbol(ring.H(), k) if k else ring.one()


def chern_in_polar(ring, j):
    """c_j as an H-weighted combination of polar classes of X."""
    n = ring.n
    out = ring.zero()
    for i in range(j + 1):
        P = ring.one() if i == 0 else ring.symbol(ring.P(i))
        out = out + _h(ring, j - i) * P * ((-1) ** i * comb(n - i + 1, j - i))
    return out


def polar_in_chern(ring, j):
    """[P_j(X)] as an H-weighted combination of Chern classes of X."""
    n = ring.n
    out = ring.zero()
    for i in range(j + 1):
        c = ring.one() if i == 0 else ring.symbol(ring.c(i))
        out = out + _h(ring, j - i) * c * ((-1) ** i * comb(n - i + 1, j - i))
    return out


def pushed_chern_in_polar(ring, k, i):
    """d_{k,i} in terms of f_i*[P_l(D_i)] and H."""
    n = ring.n
    j = k - 1
    out = ring.zero()
    for l in range(j + 1):
        out = out + _h(ring, j - l) * ring.symbol(ring.Q(l, i)) * ((-1) ** l * comb(n - l, j - l))
    return out


def pushed_polar_in_chern(ring, l, i):
    """f_i*[P_l(D_i)] in terms of d_{1,i}..d_{l+1,i} and H (D_i has dimension n-1)."""
    n = ring.n
    out = ring.zero()
    for m in range(l + 1):
        out = out + _h(ring, l - m) * ring.symbol(ring.d(m + 1, i)) * ((-1) ** m * comb(n - m, l - m))
    return out


def polar_substitution(ring):
    """Rules {symbol index: polar-side class} for every c_j and d_{j,i}."""
    rules = {}
    for j in range(1, ring.n + 1):
        rules[ring.c(j)] = chern_in_polar(ring, j)
    for i in range(ring.s):
        for k in range(1, ring.n + 1):
            rules[ring.d(k, i)] = pushed_chern_in_polar(ring, k, i)
    return rules


def apply_rules(g, rules):
    for idx, image in rules.items():
        g = g.substitute(idx, image)
    return g


def to_polar(g):
    """Chern/divisor class -> polar-symbol class (divisor powers eliminated first)."""
    ring = g.ring
    if g.uses([ring.D(i) for i in range(ring.s)]):
        g = eliminate_divisor_powers(g)
    return apply_rules(g, polar_substitution(ring))


def to_chern(g):
    """Inverse of :func:`to_polar` on the c/d side."""
    ring = g.ring
    rules = {ring.P(j): polar_in_chern(ring, j) for j in range(1, ring.n + 1)}
    for i in range(ring.s):
        for l in range(ring.n):
            rules[ring.Q(l, i)] = pushed_polar_in_chern(ring, l, i)
    return apply_rules(g, rules)


def descriptor_of(ring, e):
    """PolarDescriptor of a weight-n polar monomial (H powers absorbed)."""
    allowed = {ring.H()} | {ring.P(j) for j in range(1, ring.n + 1)}
    allowed |= {ring.Q(l, i) for l in range(ring.n) for i in range(ring.s)}
    allowed |= {ring.param(i) for i in range(ring.s)}
    for idx, k in enumerate(e):
        if k and idx not in allowed:
            raise ValueError(f"non-polar symbol {ring.names[idx]} in monomial")
    m = tuple(e[ring.P(j)] for j in range(1, ring.n + 1))
    divs = []
    for i in range(ring.s):
        used = [(l, e[ring.Q(l, i)]) for l in range(ring.n) if e[ring.Q(l, i)]]
        if not used:
            divs.append((1, 0))
        elif len(used) == 1 and used[0][1] == 1:
            divs.append((used[0][0] + 1, 1))
        else:
            raise ValueError("monomial is not linear in the polar classes of a divisor")
    return PolarDescriptor(m, tuple(divs))


def _split_params(ring, e):
    pidx = [ring.param(i) for i in range(ring.s)]
    params = tuple(e[i] for i in pidx)
    rest = list(e)
    for i in pidx:
        rest[i] = 0
    return tuple(rest), params


def polar_expansion(g):
    """Top-weight part of ``g`` as {descriptor: {param exponents: coefficient}}."""
    ring = g.ring
    top = to_polar(g.part(ring.n))
    out = {}
    for e, c in top.terms.items():
        if ring.weight(e) != ring.n:
            continue
        mono, params = _split_params(ring, e)
        desc = descriptor_of(ring, mono)
        coeffs = out.setdefault(desc, {})
        coeffs[params] = coeffs.get(params, 0) + c
    return {d: {p: c for p, c in cs.items() if c} for d, cs in out.items() if any(cs.values())}


def hrr_integrand(ring):
    """Weight-n part of ch(sum a_i D_i) * td(X)."""
    return (chern_character(ring=ring) * todd_class(ring.n, ring)).part(ring.n)


def plan_needed_descriptors(n, s=None, divisor_names=None):
    """Descriptors whose degrees enter chi(X, sum a_i D_i) with nonzero coefficient."""
    ring = ClassRing(n, _names(s, divisor_names))
    return set(polar_expansion(hrr_integrand(ring)))


def _names(s, divisor_names):
    if divisor_names is not None:
        return tuple(divisor_names)
    return ("D",) if s == 1 else tuple(f"D{i + 1}" for i in range(s or 0))


# -- assembling chi --------------------------------------------------------


class MissingDescriptorError(KeyError):
    pass


class ChiPolynomial:
    """Exact polynomial in a_1..a_s: {exponent tuple: Fraction}."""

    def __init__(self, coeffs, names):
        self.coeffs = {tuple(e): Fraction(c) for e, c in coeffs.items() if c}
        self.names = tuple(names)

    def __call__(self, *args):
        total = Fraction(0)
        for e, c in self.coeffs.items():
            t = c
            for x, k in zip(args, e):
                t *= Fraction(x) ** k
            total += t
        return total

    def __eq__(self, other):
        return isinstance(other, ChiPolynomial) and self.coeffs == other.coeffs

    def degree(self):
        return max((sum(e) for e in self.coeffs), default=0)

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = ""
        for e, c in self.sorted_items():
            mono = "*".join(
                nm if k == 1 else f"{nm}^{k}" for nm, k in zip(self.names, e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __repr__(self):
        return f"ChiPolynomial({self})"

    def to_json(self):
        return {",".join(map(str, e)): str(c) for e, c in self.sorted_items()}

    @classmethod
    def from_json(cls, data, names):
        return cls({tuple(int(x) for x in k.split(",")): Fraction(v) for k, v in data.items()}, names)


def _lookup(table, desc):
    try:
        return table[desc]
    except KeyError:
        raise MissingDescriptorError(f"degree table lacks {desc.label()}") from None


def assemble_chi(table, n=None, s=None, divisor_names=None):
    """chi(X, sum a_i D_i) from measured polar-product degrees."""
    n = table.n if n is None else n
    s = table.s if s is None else s
    ring = ClassRing(n, _names(s, divisor_names))
    coeffs = {}
    for desc, poly in polar_expansion(hrr_integrand(ring)).items():
        deg = _lookup(table, desc)
        for e, c in poly.items():
            coeffs[e] = coeffs.get(e, 0) + c * deg
    return ChiPolynomial(coeffs, ring.param_names)


def class_degree(g, table):
    """deg of a class (a polynomial in H, c, d, D): integral of H^{n-w} * g."""
    ring = g.ring
    padded = ring.zero()
    for e, c in g.terms.items():
        w = ring.weight(e)
        padded = padded + GradedClass(ring, {e: c}) * _h(ring, ring.n - w)
    total = Fraction(0)
    for desc, poly in polar_expansion(padded).items():
        deg = _lookup(table, desc)
        total += sum(poly.values()) * deg
    return total


def _divisors_of(e):
    ranges = [range(k + 1) for k in e]
    for sub in product(*ranges):
        if any(sub):
            yield tuple(sub)


def chern_monomials(ring):
    """Monomials tabulated alongside chi: c/d sub-monomials and D monomials.

    Includes H^n, every nonconstant divisor of a monomial of the eliminated
    integrand, and the divisor-class monomials of the integrand itself.
    """
    integrand = hrr_integrand(ring)
    pidx = {ring.param(i) for i in range(ring.s)}

    def strip(e):
        return tuple(0 if i in pidx else k for i, k in enumerate(e))

    eliminated = eliminate_divisor_powers(integrand)
    subs = set()
    for e in eliminated.terms:
        subs.update(_divisors_of(strip(e)))
    d_mons = {strip(e) for e in integrand.terms if any(e[ring.D(i)] for i in range(ring.s))}
    h_top = tuple(ring.n if i == ring.H() else 0 for i in range(ring.size))
    key = lambda e: (any(e[ring.D(i)] for i in range(ring.s)), _d_part(ring, e), ring.weight(e), e[::-1])
    ordered = [h_top] + sorted(subs, key=key) + sorted(d_mons - subs, key=key)
    return ordered


def _d_part(ring, e):
    return tuple(e[ring.d(j, i)] for i in range(ring.s) for j in range(1, ring.n + 1))[::-1]


def chern_table(table, divisor_names=None):
    """{monomial name: degree} for the tabulated Chern/divisor monomials."""
    ring = ClassRing(table.n, _names(table.s, divisor_names))
    out = {}
    for e in chern_monomials(ring):
        deg = class_degree(GradedClass(ring, {e: Fraction(1)}), table)
        if deg.denominator != 1:
            raise ValueError(f"non-integral degree {deg} for {monomial_name(ring, e)}")
        out[monomial_name(ring, e)] = int(deg)
    return out


def surface_shortcut_check(table, a, divisor_names=None):
    """chi(X, aD) on a surface via L(L - K)/2 + chi(O_X), K = -c_1."""
    if table.n != 2 or table.s != 1:
        raise ValueError("the surface shortcut needs n = 2 and a single divisor")
    ring = ClassRing(2, _names(1, divisor_names))
    D = ring.symbol(ring.D(0))
    c1 = ring.symbol(ring.c(1))
    c2 = ring.symbol(ring.c(2))
    a = Fraction(a)
    dd = class_degree(D * D, table)
    c1d = class_degree(c1 * D, table)
    noether = (class_degree(c1 * c1, table) + class_degree(c2, table)) / 12
    return a * a * dd / 2 + a * c1d / 2 + noether


def chern_table_descriptors(n, divisor_names):
    """Descriptors needed to evaluate :func:`chern_table`."""
    ring = ClassRing(n, tuple(divisor_names))
    out = set()
    for e in chern_monomials(ring):
        w = ring.weight(e)
        g = GradedClass(ring, {e: Fraction(1)}) * _h(ring, ring.n - w)
        out.update(polar_expansion(g))
    return out
