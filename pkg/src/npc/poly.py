"""Exact multivariate polynomials over Q or GF(p).

Polynomials are immutable maps from dense exponent tuples to nonzero
coefficients.  Rational coefficients use :class:`fractions.Fraction`;
prime-field coefficients are plain ints in ``[0, p)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import lcm

DEFAULT_PRIME = 32003


class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the offending character offset."""

    def __init__(self, message, pos, text=""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Ring:
    """Polynomial ring k[x0..xr] with k = Q (``modulus=None``) or GF(modulus)."""

    def __init__(self, variables, modulus=None, order="degrevlex"):
        variables = tuple(variables)
        if len(variables) < 2:
            raise ValueError("a ring needs at least two variables")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise ValueError(f"invalid variable name {v!r}")
        if modulus is not None and not _is_prime(modulus):
            raise ValueError(f"{modulus} is not prime")
        self.variables = variables
        self.modulus = modulus
        self.order = order
        self._index = {v: i for i, v in enumerate(variables)}

    @property
    def nvars(self):
        return len(self.variables)

    def index(self, name):
        return self._index[name]

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.variables == other.variables
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.variables, self.modulus))

    def __repr__(self):
        field = "QQ" if self.modulus is None else f"GF({self.modulus})"
        return f"Ring({', '.join(self.variables)}; {field})"

    def with_modulus(self, modulus):
        return Ring(self.variables, modulus, self.order)

    def subring(self, keep):
        """Ring on the variables named in ``keep`` (original order kept)."""
        keep = set(keep)
        return Ring([v for v in self.variables if v in keep], self.modulus, self.order)

    def coerce(self, c):
        if self.modulus is None:
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator % self.modulus == 0:
                raise ZeroDivisionError(
                    f"denominator {c.denominator} vanishes mod {self.modulus}; choose another prime"
                )
            return c.numerator * pow(c.denominator, -1, self.modulus) % self.modulus
        return int(c) % self.modulus

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = self.coerce(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, i):
        if isinstance(i, str):
            i = self._index[i]
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.coerce(1)})

    @property
    def gens(self):
        return tuple(self.gen(i) for i in range(self.nvars))

    def linear_form(self, coeffs):
        n = self.nvars
        terms = {}
        for i, c in enumerate(coeffs):
            c = self.coerce(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return Polynomial(self, terms)

    def parse(self, text):
        return parse_polynomial(text, self)

    __call__ = parse


def degrevlex_key(e):
    """Sort key: larger key means larger monomial in degrevlex."""
    return (sum(e),) + tuple(-x for x in reversed(e))


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring, terms):
        """Build from an iterable of (exponent, coeff); like terms combined."""
        out = {}
        for e, c in terms:
            e = tuple(e)
            if len(e) != ring.nvars:
                raise ValueError("exponent vector has wrong length")
            out[e] = out.get(e, 0) + ring.coerce(c)
        if ring.modulus is not None:
            out = {e: c % ring.modulus for e, c in out.items()}
        return cls(ring, {e: c for e, c in out.items() if c})

    # -- basic queries -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def variables_used(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return used

    def sorted_terms(self, key=degrevlex_key):
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, key=degrevlex_key):
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        return self.ring.constant(other)

    def _clean(self, terms):
        p = self.ring.modulus
        if p is None:
            return Polynomial(self.ring, {e: c for e, c in terms.items() if c})
        return Polynomial(self.ring, {e: c % p for e, c in terms.items() if c % p})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._clean(out)

    __radd__ = __add__

    def __neg__(self):
        return self._clean({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._clean(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        c = self.ring.coerce(c)
        return self._clean({e: c * v for e, v in self.terms.items()})

    def monic(self, key=degrevlex_key):
        if not self.terms:
            return self
        _, c = self.leading_term(key)
        if self.ring.modulus is None:
            return self.scale(1 / c)
        return self.scale(pow(c, -1, self.ring.modulus))

    def differentiate(self, var):
        return differentiate(self, var)

    def evaluate(self, point):
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x**k
            total += t
        return self.ring.coerce(total) if self.ring.modulus else total

    def substitute(self, images):
        """Replace variable i by ``images[i]`` (polynomials over one target ring)."""
        target = images[0].ring
        result = target.zero()
        cache = {}
        for e, c in self.terms.items():
            t = target.constant(c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = images[i] ** k
                    t = t * cache[(i, k)]
            result = result + t
        return result

    # -- printing ------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        pieces = []
        for e, c in self.sorted_terms():
            if self.ring.modulus is not None and c > self.ring.modulus // 2:
                c = c - self.ring.modulus
            sign = "-" if c < 0 else "+"
            c = abs(c)
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self})"


def differentiate(p, var):
    """Formal partial derivative with respect to variable index (or name)."""
    if isinstance(var, str):
        var = p.ring.index(var)
    if not 0 <= var < p.ring.nvars:
        raise IndexError(f"variable index {var} out of range")
    out = {}
    for e, c in p.terms.items():
        k = e[var]
        if k:
            ne = e[:var] + (k - 1,) + e[var + 1 :]
            out[ne] = c * k
    return p._clean(out)


# -- parsing -----------------------------------------------------------

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()])")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        num, ident, sym = m.groups()
        if num is not None:
            tokens.append(("int", int(num), pos))
        elif ident is not None:
            tokens.append(("var", ident, pos))
        else:
            tokens.append((sym, sym, pos))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0
        # parse over Q first; reduce at the end so 1/2 works in GF(p)
        self.qring = ring if ring.modulus is None else ring.with_modulus(None)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2], self.text)
        self.i += 1
        return tok

    def poly(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        result = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            result = result + self.term().scale(sign)
        return result

    def term(self):
        tok = self.peek()
        value = self.qring.one()
        seen = False
        if tok[0] == "int":
            self.take()
            num = tok[1]
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.take("int")
                if den_tok[1] == 0:
                    raise ParseError("zero denominator", den_tok[2], self.text)
                value = self.qring.constant(Fraction(num, den_tok[1]))
            else:
                value = self.qring.constant(num)
            value = self.power(value)
            seen = True
        while True:
            tok = self.peek()
            if tok[0] == "*":
                if not seen:
                    raise ParseError("unexpected '*'", tok[2], self.text)
                self.take()
                value = value * self.factor()
            elif tok[0] in ("var", "("):
                value = value * self.factor()
            elif tok[0] == "int" and seen:
                # 2*3 style constant factor
                raise ParseError("unexpected number", tok[2], self.text)
            else:
                break
            seen = True
        if not seen:
            raise ParseError(f"expected a term, found {tok[1]!r}", tok[2], self.text)
        return value

    def factor(self):
        tok = self.peek()
        if tok[0] == "var":
            self.take()
            if tok[1] not in self.qring._index:
                raise ParseError(f"undeclared variable {tok[1]!r}", tok[2], self.text)
            base = self.qring.gen(tok[1])
        elif tok[0] == "(":
            self.take()
            base = self.poly()
            self.take(")")
        elif tok[0] == "int":
            self.take()
            base = self.qring.constant(tok[1])
        else:
            raise ParseError(f"expected a factor, found {tok[1]!r}", tok[2], self.text)
        return self.power(base)

    def power(self, base):
        if self.peek()[0] == "^":
            self.take()
            return base ** self.take("int")[1]
        return base

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty polynomial", 0, self.text)
        result = self.poly()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        if self.ring.modulus is not None:
            return reduce_mod_p(result, self.ring.modulus)
        return result


def parse_polynomial(text, ring):
    """Parse ``text`` (grammar: sums of terms ``coef*var^k*(...)``) over ``ring``."""
    return _Parser(text, ring).parse()


def reduce_mod_p(p, prime):
    """Coefficientwise image of a rational polynomial in GF(prime)."""
    target = p.ring.with_modulus(prime)
    out = {}
    for e, c in p.terms.items():
        c = Fraction(c)
        if c.denominator % prime == 0:
            raise ZeroDivisionError(
                f"coefficient {c} has denominator divisible by {prime}; choose another prime"
            )
        v = c.numerator * pow(c.denominator, -1, prime) % prime
        if v:
            out[e] = v
    return Polynomial(target, out)


def clear_denominators(p):
    """Scale a rational polynomial to integer coefficients (same zero set)."""
    if p.ring.modulus is not None or not p.terms:
        return p
    den = reduce(lcm, (Fraction(c).denominator for c in p.terms.values()), 1)
    return p.scale(den)


# -- matrices ----------------------------------------------------------


class PolyMatrix:
    """Rectangular row-major grid of polynomials over a single ring."""

    def __init__(self, rows, ring, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else ring.nvars
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        if any(e.ring != ring for r in rows for e in r):
            raise ValueError("matrix entries from different rings")
        self.rows = rows
        self.ring = ring
        self.nrows = len(rows)
        self.ncols = ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def determinant(self, rows=None, cols=None, memo=None):
        """Determinant of the submatrix on ``rows`` x ``cols`` by cofactor expansion.

        ``memo`` may be shared across calls on the same matrix.
        """
        rows = tuple(range(self.nrows)) if rows is None else tuple(rows)
        cols = tuple(range(self.ncols)) if cols is None else tuple(cols)
        if len(rows) != len(cols):
            raise ValueError("determinant of a non-square submatrix")
        if memo is None:
            memo = {}
        return self._det(rows, cols, memo)

    def _det(self, rows, cols, memo):
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if not rows:
            result = self.ring.one()
        elif len(rows) == 1:
            result = self.rows[rows[0]][cols[0]]
        else:
            r0, rest = rows[0], rows[1:]
            result = self.ring.zero()
            for pos, c in enumerate(cols):
                entry = self.rows[r0][c]
                if entry.is_zero():
                    continue
                sub = self._det(rest, cols[:pos] + cols[pos + 1 :], memo)
                if sub.is_zero():
                    continue
                term = entry * sub
                result = result - term if pos % 2 else result + term
        memo[key] = result
        return result

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols})"


def jacobian(polys, ring):
    """Matrix whose (i, v) entry is d polys[i] / d x_v."""
    return PolyMatrix(
        [[differentiate(f, v) for v in range(ring.nvars)] for f in polys], ring, ring.nvars
    )


def minors_with_required_rows(M, k, required):
    """Nonzero k x k minors of ``M`` whose row set contains every row in ``required``.

    Required rows are expanded first, so cofactors on the remaining rows are
    shared between minors through one memo table.
    """
    if k > min(M.nrows, M.ncols) or k < 0:
        raise ValueError(f"minor size {k} exceeds a {M.nrows}x{M.ncols} matrix")
    required = tuple(sorted(set(required)))
    if any(not 0 <= r < M.nrows for r in required):
        raise IndexError("required row out of range")
    if len(required) > k:
        return []
    others = [r for r in range(M.nrows) if r not in required]
    memo = {}
    out = []
    for extra in combinations(others, k - len(required)):
        rows = required + extra
        # expansion along `rows` in this order; sign fix for the reordering
        sign = _perm_sign(rows)
        for cols in combinations(range(M.ncols), k):
            d = M._det(rows, cols, memo)
            if d:
                out.append(d if sign > 0 else -d)
    return out


def _perm_sign(seq):
    """Sign of the permutation sorting ``seq``."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class Ideal:
    """Homogeneous ideal given by nonzero generators over one ring."""

    def __init__(self, ring, generators, check=True):
        gens = [g for g in generators if not g.is_zero()]
        if check:
            for g in gens:
                if g.ring != ring:
                    raise ValueError("generator from a different ring")
                if not g.is_homogeneous():
                    raise ValueError(f"generator {g} is not homogeneous")
        self.ring = ring
        self.generators = tuple(gens)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __add__(self, other):
        if isinstance(other, Ideal):
            other = other.generators
        return Ideal(self.ring, list(self.generators) + list(other))

    def reduce_mod_p(self, prime):
        return Ideal(
            self.ring.with_modulus(prime),
            [reduce_mod_p(clear_denominators(g), prime) for g in self.generators],
        )

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators))})"
