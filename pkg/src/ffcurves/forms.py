"""Homogeneous binary and ternary forms over a finite field.

A :class:`BinaryForm` of degree d stores ``coeffs[i]``, the coefficient of
``s^i t^(d-i)``; the projective root ``[1:0]`` therefore shows up as a
drop in the degree of the dehomogenized polynomial ``f(s) = F(s, 1)``.
A :class:`TernaryForm` stores a dict from exponent triples to nonzero ints
of its field.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

from . import poly
from .errors import DegenerateLeadingCoefficient, ZeroForm
from .gf import FieldElement, embedding_table, extension, restriction_table

VARS = ("x", "y", "z")


def monomials(d):
    """Exponent triples of degree d, in decreasing lexicographic order."""
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


class TernaryForm:
    __slots__ = ("ctx", "degree", "terms")

    def __init__(self, ctx, degree, terms=None):
        self.ctx = ctx
        self.degree = degree
        clean = {}
        for mono, c in (terms or {}).items():
            if sum(mono) != degree:
                raise ValueError(f"monomial {mono} is not of degree {degree}")
            if c:
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, ctx, mono, c=1):
        return cls(ctx, sum(mono), {tuple(mono): c})

    @classmethod
    def linear(cls, ctx, a, b, c):
        return cls(ctx, 1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, TernaryForm)
            and self.ctx is other.ctx
            and (self.degree == other.degree or (self.is_zero and other.is_zero))
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        return f"TernaryForm({self.to_text()})"

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if other.ctx is not self.ctx:
            raise ValueError("forms over different fields")

    def __add__(self, other):
        self._check(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if other.degree != self.degree:
            raise ValueError("adding forms of different degrees")
        out = dict(self.terms)
        add = self.ctx.add
        for m, c in other.terms.items():
            out[m] = add(out.get(m, 0), c)
        return TernaryForm(self.ctx, self.degree, out)

    def __neg__(self):
        neg = self.ctx.neg
        return TernaryForm(self.ctx, self.degree, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        mul = self.ctx.mul
        return TernaryForm(self.ctx, self.degree, {m: mul(v, c) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other % self.ctx.p if self.ctx.m == 1 else self.ctx.from_int(other))
        self._check(other)
        add, mul = self.ctx.add, self.ctx.mul
        out = {}
        for (a, b, c), u in self.terms.items():
            for (i, j, k), v in other.terms.items():
                key = (a + i, b + j, c + k)
                out[key] = add(out.get(key, 0), mul(u, v))
        return TernaryForm(self.ctx, self.degree + other.degree, out)

    def __pow__(self, n):
        out = TernaryForm(self.ctx, 0, {(0, 0, 0): 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def frobenius_twist(self, k=1):
        """F^(p^k): exponents times p^k and coefficients raised to p^k (char p)."""
        pk = self.ctx.p ** k
        frob = self.ctx.frobenius
        return TernaryForm(
            self.ctx, self.degree * pk,
            {(a * pk, b * pk, c * pk): frob(v, k) for (a, b, c), v in self.terms.items()},
        )

    def partial(self, var):
        ctx = self.ctx
        if self.degree == 0:
            return TernaryForm(ctx, 0)
        out = {}
        for mono, c in self.terms.items():
            e = mono[var]
            if e % ctx.p == 0:
                continue
            new = list(mono)
            new[var] -= 1
            out[tuple(new)] = ctx.mul(c, e % ctx.p)
        return TernaryForm(ctx, self.degree - 1, out)

    def change_ring(self, target):
        """Base change along the canonical embedding into ``target``."""
        table = embedding_table(self.ctx, target)
        return TernaryForm(target, self.degree, {m: table[c] for m, c in self.terms.items()})

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), 0)

    # evaluation and substitution ------------------------------------------

    def evaluate(self, point, ctx=None):
        """Value at a coordinate triple of ints of ``ctx`` (default: own field)."""
        ctx = ctx or self.ctx
        table = None if ctx is self.ctx else embedding_table(self.ctx, ctx)
        pw = ctx.pow
        add, mul = ctx.add, ctx.mul
        acc = 0
        x, y, z = point
        for (a, b, c), v in self.terms.items():
            if table is not None:
                v = table[v]
            t = mul(mul(v, pw(x, a)), mul(pw(y, b), pw(z, c)))
            acc = add(acc, t)
        return acc

    def evaluate_many(self, X, Y, Z, ctx=None):
        """Vectorized evaluation over numpy arrays of coordinates."""
        import numpy as np

        ctx = ctx or self.ctx
        table = None if ctx is self.ctx else embedding_table(self.ctx, ctx)
        acc = np.zeros(np.broadcast(X, Y, Z).shape, dtype=np.int64)
        cache = {}

        def power(arr, name, k):
            key = (name, k)
            if key not in cache:
                cache[key] = ctx.vpow(arr, k)
            return cache[key]

        for (a, b, c), v in self.terms.items():
            if table is not None:
                v = table[v]
            t = ctx.vmul(ctx.vmul(power(X, "x", a), power(Y, "y", b)), power(Z, "z", c))
            acc = ctx.vadd(acc, ctx.vmul(t, v))
        return acc

    def compose(self, M):
        """F(M.X) for a 3x3 matrix of ints (rows give x, y, z as linear forms)."""
        ctx = self.ctx
        lin = [TernaryForm.linear(ctx, *row) for row in M]
        pows = []
        for L in lin:
            ps = [TernaryForm(ctx, 0, {(0, 0, 0): 1})]
            for _ in range(self.degree):
                ps.append(ps[-1] * L)
            pows.append(ps)
        out = TernaryForm(ctx, self.degree)
        for (a, b, c), v in self.terms.items():
            out = out + (pows[0][a] * pows[1][b] * pows[2][c]).scale(v)
        if out.is_zero:
            return TernaryForm(ctx, self.degree)
        return out

    def coefficients_in(self, var):
        """``[f_0, ..., f_d]`` with F = sum f_j * var^j; f_j as univariate polys.

        Each f_j is a binary form in the two remaining variables (u, w), kept
        as the low-first coefficient list of f_j(u, 1).
        """
        others = [i for i in range(3) if i != var]
        out = [[0] * (self.degree - j + 1) for j in range(self.degree + 1)]
        for mono, c in self.terms.items():
            j = mono[var]
            out[j][mono[others[0]]] = c
        return out

    # text -----------------------------------------------------------------

    def to_text(self):
        if self.is_zero:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            c = self.terms[mono]
            factors = []
            for v, e in zip(VARS, mono):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            lit = self.ctx.format_element(c)
            if not factors:
                parts.append(lit)
            elif lit == "1":
                parts.append("*".join(factors))
            else:
                parts.append("*".join([lit] + factors))
        return " + ".join(parts)


@dataclass(frozen=True)
class BinaryForm:
    ctx: object
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient vector must have degree + 1 entries")

    @property
    def is_zero(self):
        return not any(self.coeffs)

    def dehomogenized(self):
        """f(s) = F(s, 1) as a trimmed low-first list."""
        return poly.trim(list(self.coeffs))

    def evaluate(self, s, t):
        F = self.ctx
        acc = 0
        d = self.degree
        for i, c in enumerate(self.coeffs):
            if c:
                acc = F.add(acc, F.mul(c, F.mul(F.pow(s, i), F.pow(t, d - i))))
        return acc

    def __repr__(self):
        terms = []
        d = self.degree
        for i in range(d, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "*".join(
                m for m in (f"s^{i}" if i > 1 else ("s" if i == 1 else ""),
                            f"t^{d - i}" if d - i > 1 else ("t" if d - i == 1 else "")) if m
            )
            lit = self.ctx.format_element(c)
            terms.append(mono if lit == "1" and mono else (f"{lit}*{mono}" if mono else lit))
        return "BinaryForm(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class IntersectionProfile:
    """Multiset of (residue degree e, multiplicity m, count c)."""

    entries: tuple

    @property
    def total_degree(self):
        return sum(e * m * c for e, m, c in self.entries)

    @property
    def is_transverse(self):
        return all(m == 1 for _, m, _ in self.entries)

    def as_lists(self):
        return [list(t) for t in self.entries]

    def text(self):
        return "{" + ", ".join(f"({e},{m},x{c})" for e, m, c in self.entries) + "}"

    def __str__(self):
        return self.text()


def _bmul(F, a, b):
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def restrict(F, A, B, ctx=None):
    """F(s*A + t*B) as a BinaryForm over ``ctx`` (A, B int triples of ``ctx``)."""
    ctx = ctx or F.ctx
    table = None if ctx is F.ctx else embedding_table(F.ctx, ctx)
    d = F.degree
    pows = []
    for a, b in zip(A, B):
        ps = [[1]]
        lin = [b, a]  # index = power of s
        for _ in range(d):
            ps.append(_bmul(ctx, ps[-1], lin))
        pows.append(ps)
    out = [0] * (d + 1)
    add, mul = ctx.add, ctx.mul
    for (i, j, k), v in F.terms.items():
        if table is not None:
            v = table[v]
        prod = _bmul(ctx, _bmul(ctx, pows[0][i], pows[1][j]), pows[2][k])
        for n, c in enumerate(prod):
            if c:
                out[n] = add(out[n], mul(v, c))
    return BinaryForm(ctx, d, tuple(out))


def restrict_to_line(F, L, basis=None):
    """Restriction of F to the line L through the parametrization s*A + t*B.

    The basis defaults to the line's canonical one (its first two points in
    the global order).  A form vanishing on L restricts to the zero form,
    reported through ``BinaryForm.is_zero``.
    """
    A, B = basis if basis is not None else L.basis
    return restrict(F, A, B, L.ctx)


def factor_profile(g):
    """Residue degrees and multiplicities of the roots of a nonzero binary form."""
    if g.is_zero:
        raise ZeroForm("factor_profile of the zero form")
    F = g.ctx
    f = g.dehomogenized()
    counts = Counter()
    at_infinity = g.degree - (len(f) - 1)
    if at_infinity:
        counts[(1, at_infinity)] += 1
    for h, m in poly.squarefree_decomposition(F, f):
        for e, part in poly.distinct_degree(F, h):
            counts[(e, m)] += (len(part) - 1) // e
    entries = tuple(sorted((e, m, c) for (e, m), c in counts.items()))
    return IntersectionProfile(entries)


def rational_roots(g):
    """Rational roots [s:t] of a nonzero binary form with multiplicities, ``[((s, t), m)]``."""
    F = g.ctx
    f = g.dehomogenized()
    out = []
    at_infinity = g.degree - (len(f) - 1)
    if at_infinity:
        out.append(((1, 0), at_infinity))
    for r in poly.roots(F, f):
        out.append(((r, 1), poly.root_multiplicity(F, f, r)))
    return out


def resultant(f, g):
    """Sylvester resultant of two binary forms (descending powers of s, f-rows first)."""
    if f.ctx is not g.ctx:
        raise ValueError("forms over different fields")
    F = f.ctx
    value = poly.resultant(F, list(f.coeffs), list(g.coeffs), f.degree, g.degree)
    return FieldElement(F, value)


def _interpolate(E, xs, ys):
    """Monomial coefficients of the interpolating polynomial (Newton form)."""
    n = len(xs)
    c = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            c[i] = E.div(E.sub(c[i], c[i - 1]), E.sub(xs[i], xs[i - j]))
    out = [0] * n
    for i in range(n - 1, -1, -1):
        # out = out * (X - xs[i]) + c[i]
        for k in range(n - 1, 0, -1):
            out[k] = E.sub(out[k - 1], E.mul(out[k], xs[i]))
        out[0] = E.sub(c[i], E.mul(out[0], xs[i]))
    return out


def resultant_eliminate(F, G, var=2):
    """Res_var(F, G) as a binary form in the remaining variables, in order.

    Computed by evaluation at deg F * deg G + 1 points of an extension field
    and interpolation; the coefficients land back in the base field.
    """
    if F.ctx is not G.ctx:
        raise ValueError("forms over different fields")
    if F.is_zero or G.is_zero:
        raise ZeroForm("resultant of a zero form")
    ctx = F.ctx
    dF, dG = F.degree, G.degree
    fc = F.coefficients_in(var)
    gc = G.coefficients_in(var)
    if not fc[dF][0] and not gc[dG][0]:
        raise DegenerateLeadingCoefficient("both leading coefficients vanish")
    D = dF * dG
    k = 1
    while ctx.q ** k < D + 1:
        k += 1
    E = extension(ctx, k) if k > 1 else ctx
    table = embedding_table(ctx, E) if k > 1 else list(range(ctx.q))
    fcE = [[table[c] for c in row] for row in fc]
    gcE = [[table[c] for c in row] for row in gc]
    xs = list(range(D + 1))
    ys = []
    for x in xs:
        fz = [poly.peval(E, poly.trim(list(row)), x) for row in fcE]
        gz = [poly.peval(E, poly.trim(list(row)), x) for row in gcE]
        ys.append(poly.resultant(E, fz, gz, dF, dG))
    coeffs = _interpolate(E, xs, ys)
    if k > 1:
        back = restriction_table(ctx, E)
        coeffs = [back[c] for c in coeffs]
    return BinaryForm(ctx, D, tuple(coeffs))


def partials(F):
    return F.partial(0), F.partial(1), F.partial(2)


def frobenius_form(F, q=None):
    """x^q F_x + y^q F_y + z^q F_z (zero form or of degree q + d - 1)."""
    ctx = F.ctx
    q = ctx.q if q is None else q
    d = F.degree
    out = TernaryForm(ctx, q + d - 1)
    for var, D in enumerate(partials(F)):
        if D.is_zero:
            continue
        mono = [0, 0, 0]
        mono[var] = q
        out = out + TernaryForm.monomial(ctx, mono) * D
    return out


def _det3(m):
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def hessian(F):
    """Determinant of the matrix of second partials (degree 3(d-2) or zero)."""
    if F.degree < 2:
        raise ValueError("hessian needs degree >= 2")
    first = partials(F)
    second = [[first[i].partial(j) for j in range(3)] for i in range(3)]
    out = _det3(second)
    if out.is_zero:
        return TernaryForm(F.ctx, 3 * (F.degree - 2))
    return out


def bordered_hessian(F, var=2):
    """Flex form in the chart ``var != 0``.

    For var = z this is F_y^2 F_xx - 2 F_x F_y F_xy + F_x^2 F_yy; a smooth
    point off the line var = 0 is a flex exactly when it vanishes there
    (p > 2).  Unlike the Hessian it does not vanish identically on the
    curve when p divides d - 1.
    """
    u, w = [i for i in range(3) if i != var]
    Fu, Fw = F.partial(u), F.partial(w)
    Fuu, Fuw, Fww = Fu.partial(u), Fu.partial(w), Fw.partial(w)
    out = Fw * Fw * Fuu - Fu * Fw * Fuw * 2 + Fu * Fu * Fww
    if out.is_zero:
        return TernaryForm(F.ctx, max(3 * F.degree - 4, 0))
    return out


def divides(F, G):
    """Exact test F | G by multivariate division with respect to lex order.

    A single polynomial is a Groebner basis of the ideal it generates, so
    the remainder vanishes iff G is a multiple of F.
    """
    if F.ctx is not G.ctx:
        raise ValueError("forms over different fields")
    if F.is_zero:
        raise ZeroForm("division by the zero form")
    if G.is_zero:
        return True
    if G.degree < F.degree:
        return False
    ctx = F.ctx
    lead = max(F.terms)
    inv_lc = ctx.inv(F.terms[lead])
    rest = [(m, c) for m, c in F.terms.items() if m != lead]
    work = dict(G.terms)
    add, mul, neg = ctx.add, ctx.mul, ctx.neg
    while work:
        m = max(work)
        c = work[m]
        shift = (m[0] - lead[0], m[1] - lead[1], m[2] - lead[2])
        if min(shift) < 0:
            return False
        k = neg(mul(c, inv_lc))
        del work[m]
        for mono, v in rest:
            key = (mono[0] + shift[0], mono[1] + shift[1], mono[2] + shift[2])
            val = add(work.get(key, 0), mul(k, v))
            if val:
                work[key] = val
            else:
                work.pop(key, None)
    return True


def all_ternary_forms(ctx, d):
    """Every form of degree d over ctx (tiny fields and degrees only)."""
    monos = monomials(d)
    for coeffs in product(range(ctx.q), repeat=len(monos)):
        yield TernaryForm(ctx, d, dict(zip(monos, coeffs)))
