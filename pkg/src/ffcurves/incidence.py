"""Line classification, good lines, tangent censuses, the Frobenius
incidence divisor and collinearity statistics for a plane curve.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import poly
from .errors import (
    CoordinateChangeExhausted,
    CurveContainsLine,
    FrobeniusNonClassical,
)
from .forms import (
    IntersectionProfile,
    TernaryForm,
    factor_profile,
    frobenius_form,
    rational_roots,
    restrict_to_line,
    resultant_eliminate,
)
from .gf import QuotientField, embedding_table, extension, size_cap
from .projective import ProjLine, all_lines, order_key, triples

TRANSVERSE = "Transverse"
RATIONAL_TANGENT = "RationalTangent"
SPECIAL_TANGENT = "SpecialTangent"
KINDS = (TRANSVERSE, RATIONAL_TANGENT, SPECIAL_TANGENT)

N_READING = (
    "N counts distinct non-rational geometric points P with Frob(P) on the "
    "tangent line at P; rational points are bounded separately by 2*#C(F_q)"
)

CENTER_RETRIES = 8
_CENTER_SEED = 0xF20B
# extensions up to this size are handled with tabulated arithmetic
TABLE_FIELD_MAX = 1 << 16


@dataclass(frozen=True)
class LineClass:
    line: ProjLine
    kind: str
    profile: IntersectionProfile
    rational_points: tuple  # ((coords, multiplicity), ...) in the global order

    @property
    def rational_count(self):
        return len(self.rational_points)

    def as_dict(self):
        F = self.line.ctx
        return {
            "line": [F.format_element(c) for c in self.line.coords],
            "class": self.kind,
            "profile": self.profile.as_lists(),
            "rational_points": [
                {"point": [F.format_element(c) for c in P], "multiplicity": m}
                for P, m in self.rational_points
            ],
        }


def _kind(profile):
    if profile.is_transverse:
        return TRANSVERSE
    if any(e == 1 and m >= 2 for e, m, _ in profile.entries):
        return RATIONAL_TANGENT
    return SPECIAL_TANGENT


def classify_line(C, L):
    g = restrict_to_line(C.F, L)
    if g.is_zero:
        raise CurveContainsLine(f"the curve contains the line {L.text()}")
    profile = factor_profile(g)
    pts = sorted(((L.point_at(s, t), m) for (s, t), m in rational_roots(g)),
                 key=lambda pm: order_key(pm[0]))
    return LineClass(L, _kind(profile), profile, tuple(pts))


def find_good_line(C):
    """First transverse line in the global order, or None."""
    for L in all_lines(C.ctx):
        if classify_line(C, L).kind == TRANSVERSE:
            return L
    return None


@dataclass
class CensusReport:
    q: int
    records: list
    T: int = 0
    R: int = 0
    S: int = 0
    histograms: dict = field(default_factory=dict)
    good_line: ProjLine | None = None

    @property
    def lines_total(self):
        return self.T + self.R + self.S

    def counts(self):
        return (self.T, self.R, self.S)

    def of_kind(self, kind):
        return [r for r in self.records if r.kind == kind]


def tangent_census(C):
    """Classify every line over the base field (exhaustive, in the global order)."""
    records = [classify_line(C, L) for L in all_lines(C.ctx)]
    counts = Counter(r.kind for r in records)
    hist = {k: Counter() for k in KINDS}
    for r in records:
        hist[r.kind][r.profile.text()] += 1
    good = next((r.line for r in records if r.kind == TRANSVERSE), None)
    return CensusReport(
        q=C.q,
        records=records,
        T=counts[TRANSVERSE],
        R=counts[RATIONAL_TANGENT],
        S=counts[SPECIAL_TANGENT],
        histograms={k: dict(sorted(v.items())) for k, v in hist.items()},
        good_line=good,
    )


def collinear_rational_max(C, census=None):
    """(largest number of rational curve points on one line, first such line)."""
    if C.d == 1:
        # the curve is itself a line
        return C.q + 1, ProjLine.make(C.ctx, tuple(C.F.coefficient(m) for m in ((1, 0, 0), (0, 1, 0), (0, 0, 1))))
    census = census or tangent_census(C)
    best = max(census.records, key=lambda r: r.rational_count)
    return best.rational_count, best.line


def incidence_sum(C, census=None):
    """Sum over lines of the number of rational points of C on the line."""
    census = census or tangent_census(C)
    return sum(r.rational_count for r in census.records)


@dataclass(frozen=True)
class AverageReport:
    average: Fraction
    hv_value: Fraction | None = None
    lower: Fraction | None = None

    @property
    def matches_hv(self):
        return None if self.hv_value is None else self.average == self.hv_value

    @property
    def exceeds_lower(self):
        return None if self.lower is None else self.hv_value > self.lower


def average_rational_per_line(C, fnc=None, count=None):
    """Exact average #C(F_q)(q+1)/(q^2+q+1); for FNC curves also the chain
    d(q-d+2)(q+1)/(q^2+q+1) > d(1 - d/(q+1)).
    """
    q, d = C.q, C.d
    n = C.count_points(1) if count is None else count
    avg = Fraction(n * (q + 1), q * q + q + 1)
    if fnc is None:
        fnc = C.is_frobenius_nonclassical()
    if not fnc:
        return AverageReport(avg)
    hv = Fraction(d * (q - d + 2) * (q + 1), q * q + q + 1)
    lower = d * (1 - Fraction(d, q + 1))
    return AverageReport(avg, hv, lower)


# local intersection multiplicities --------------------------------------------

def _series_mul(E, a, b, n):
    out = [0] * n
    add, mul = E.add, E.mul
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(min(len(b), n - i)):
                y = b[j]
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def _series_inv(E, a, n):
    """1/a mod U^n for a with nonzero constant term."""
    inv0 = E.inv(a[0])
    out = [inv0] + [0] * (n - 1)
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j] and out[k - j]:
                acc = E.add(acc, E.mul(a[j], out[k - j]))
        out[k] = E.neg(E.mul(acc, inv0))
    return out


def _affine_shift(form, E, point, lead, u_idx, v_idx):
    """{(a, b): c} with f(U, V) = form at x_lead = 1, x_u = P_u + U, x_v = P_v + V."""
    table = embedding_table(form.ctx, E)
    p = E.p
    pu, pv = point[u_idx], point[v_idx]
    out = {}

    def binom_row(n, base):
        row = []
        for k in range(n + 1):
            c = comb(n, k) % p
            row.append(E.mul(c, E.pow(base, n - k)) if c else 0)
        return row

    for mono, c in form.terms.items():
        c = table[c]
        ru = binom_row(mono[u_idx], pu)
        rv = binom_row(mono[v_idx], pv)
        for a, x in enumerate(ru):
            if not x:
                continue
            cx = E.mul(c, x)
            for b, y in enumerate(rv):
                if y:
                    key = (a, b)
                    out[key] = E.add(out.get(key, 0), E.mul(cx, y))
    return {k: v for k, v in out.items() if v}


def _substitute(E, f, phi, n):
    """f(U, phi(U)) mod U^n."""
    by_b = {}
    for (a, b), c in f.items():
        by_b.setdefault(b, {})[a] = c
    out = [0] * n
    power = [1] + [0] * (n - 1)
    for b in range(max(by_b) + 1):
        if b in by_b:
            coef = [0] * n
            for a, c in by_b[b].items():
                if a < n:
                    coef[a] = c
            term = _series_mul(E, coef, power, n)
            out = [E.add(x, y) for x, y in zip(out, term)]
        power = _series_mul(E, power, phi, n)
    return out


def local_multiplicity(F, G, point, E, limit=None):
    """I_P(F, G) at a smooth point P of F = 0 with coordinates in E.

    F is parametrized at P by a power series (Newton iteration) and the
    order of G along the branch is read off.
    """
    lead = next(i for i, c in enumerate(point) if c)
    if point[lead] != 1:
        inv = E.inv(point[lead])
        point = tuple(E.mul(c, inv) for c in point)
    u_idx, v_idx = [i for i in range(3) if i != lead]
    f = _affine_shift(F, E, point, lead, u_idx, v_idx)
    g = _affine_shift(G, E, point, lead, u_idx, v_idx)
    if f.get((0, 0)):
        raise ValueError("point is not on the curve")
    if not f.get((0, 1)):
        if not f.get((1, 0)):
            raise ValueError("point is singular")
        f = {(b, a): c for (a, b), c in f.items()}
        g = {(b, a): c for (a, b), c in g.items()}
    f_v = {}
    for (a, b), c in f.items():
        if b % E.p:
            f_v[(a, b - 1)] = E.mul(c, b % E.p)
    limit = limit or 4 * F.degree * G.degree + 8
    n = 8
    while True:
        phi = [0]
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            phi = phi + [0] * (prec - len(phi))
            val = _substitute(E, f, phi, prec)
            der = _substitute(E, f_v, phi, prec)
            step = _series_mul(E, val, _series_inv(E, der, prec), prec)
            phi = [E.sub(x, y) for x, y in zip(phi, step)]
        series = _substitute(E, g, phi, n)
        for k, c in enumerate(series):
            if c:
                return k
        if n >= limit:
            raise ArithmeticError("G vanishes along the branch to high order")
        n *= 2


# the Frobenius incidence divisor -----------------------------------------------

@dataclass
class FrobeniusProfile:
    """C . V(G) with G = x^q F_x + y^q F_y + z^q F_z.

    ``entries`` holds (residue degree e, multiplicity m, number of closed
    points c); ``rational_points`` lists ((coords), multiplicity).
    """

    d: int
    q: int
    entries: tuple
    rational_points: tuple
    center: tuple
    attempts: int

    @property
    def total_degree(self):
        return sum(e * m * c for e, m, c in self.entries)

    @property
    def expected_degree(self):
        return self.d * (self.q + self.d - 1)

    @property
    def N(self):
        """Distinct non-rational geometric points of the divisor's support."""
        return sum(e * c for e, m, c in self.entries if e > 1)

    @property
    def rational_count(self):
        return len(self.rational_points)

    @property
    def rational_mult_ok(self):
        return all(m >= 2 for _, m in self.rational_points)


class _Ambiguous(Exception):
    pass


def _change_matrix(center):
    """Rows give x, y, z as linear forms in new coordinates; e3 maps to ``center``."""
    lead = next(i for i, c in enumerate(center) if c)
    others = [i for i in range(3) if i != lead]
    M = [[0, 0, 0] for _ in range(3)]
    M[others[0]][0] = 1
    M[others[1]][1] = 1
    for r in range(3):
        M[r][2] = center[r]
    return M


def _fiber_poly(K, form, a, b, embed):
    """form(a, b, z) as a polynomial in z over K (coefficients mapped by ``embed``)."""
    out = [K.zero] * (form.degree + 1)
    pa, pb = {}, {}
    for (i, j, k), c in form.terms.items():
        if i not in pa:
            pa[i] = K.pow(a, i)
        if j not in pb:
            pb[j] = K.pow(b, j)
        t = K.mul(embed(c), K.mul(pa[i], pb[j]))
        out[k] = K.add(out[k], t)
    return poly.trim(out)


def _apply(K, M, v, embed):
    return tuple(
        K.add(K.add(K.mul(embed(M[r][0]), v[0]), K.mul(embed(M[r][1]), v[1])), K.mul(embed(M[r][2]), v[2]))
        for r in range(3)
    )


def _orbits(E, roots, q):
    """Group the roots into orbits of x -> x^q, one representative each."""
    left = set(roots)
    reps = []
    for r in sorted(roots):
        if r not in left:
            continue
        reps.append(r)
        x = r
        while x in left:
            left.discard(x)
            x = E.pow(x, q)
    return reps


def _factor_degrees(K, g):
    """[(s, irreducible factor)] of the squarefree part of g over K."""
    out = []
    for h, _ in poly.squarefree_decomposition(K, g):
        for s, part in poly.distinct_degree(K, h):
            if s == 1:
                out.extend((1, [K.neg(r), K.one]) for r in poly.roots(K, part))
            else:
                out.extend((s, f) for f in poly.equal_degree(K, part, s))
    return out


def _resolve_fiber(C, G, K, base_e, a, b, m, Fp, Gp, M, embed, table_field):
    """Closed points (e, mult) and rational points on one fiber of the projection."""
    fz = _fiber_poly(K, Fp, a, b, embed)
    gz = _fiber_poly(K, Gp, a, b, embed)
    g = poly.pgcd(K, fz, gz)
    factors = _factor_degrees(K, g)
    if not factors:
        raise AssertionError("empty fiber over a root of the resultant")
    if len(factors) == 1:
        s, h = factors[0]
        if m % s:
            raise _Ambiguous()
        if s == 1 and base_e == 1:
            z = K.neg(h[0])
            coords = _normalize(K, _apply(K, M, (a, b, z), embed))
            return [], [(coords, m)]
        return [(base_e * s, m // s)], []
    # several points: exact multiplicities where coordinates are at hand
    if not table_field:
        raise _Ambiguous()
    closed, rational = [], []
    known = 0
    unknown = []
    for s, h in factors:
        if s > 1:
            unknown.append(s)
            continue
        z = K.neg(h[0])
        coords = _normalize(K, _apply(K, M, (a, b, z), embed))
        mult = local_multiplicity(C.F, G, coords, K)
        known += mult
        if base_e == 1:
            rational.append((coords, mult))
        else:
            closed.append((base_e, mult))
    rest = m - known
    if len(unknown) > 1 or (unknown and (rest <= 0 or rest % unknown[0])) or (not unknown and rest):
        raise _Ambiguous()
    if unknown:
        closed.append((base_e * unknown[0], rest // unknown[0]))
    return closed, rational


def _normalize(K, coords):
    for c in coords:
        if c:
            inv = K.inv(c)
            return tuple(K.mul(x, inv) for x in coords)
    raise AssertionError("zero coordinates")


def _profile_for_center(C, G, center):
    ctx = C.ctx
    M = _change_matrix(center)
    Fp = C.F.compose(M)
    Gp = frobenius_form(Fp)
    if not Gp.coefficient((0, 0, Gp.degree)):
        # p | d: add a multiple of F' to make G' monic in z
        Gp = Gp + TernaryForm.monomial(ctx, (0, 0, C.q - 1)) * Fp
    R = resultant_eliminate(Fp, Gp, 2)
    f = R.dehomogenized()
    closed = Counter()
    rational = []
    ident = lambda c: c  # noqa: E731

    def take(result):
        cl, ra = result
        for e, mult in cl:
            closed[(e, mult)] += 1
        rational.extend(ra)

    at_inf = R.degree - (len(f) - 1)
    if at_inf:
        take(_resolve_fiber(C, G, ctx, 1, 1, 0, at_inf, Fp, Gp, M, ident, True))
    for h, m in poly.squarefree_decomposition(ctx, f):
        for e, part in poly.distinct_degree(ctx, h):
            if e == 1:
                for a in poly.roots(ctx, part):
                    take(_resolve_fiber(C, G, ctx, 1, a, 1, m, Fp, Gp, M, ident, True))
            elif ctx.q ** e <= min(TABLE_FIELD_MAX, size_cap()):
                E = extension(ctx, e)
                table = embedding_table(ctx, E)
                emb = table.__getitem__
                rs = poly.roots(E, [table[c] for c in part])
                for a in _orbits(E, rs, ctx.q):
                    take(_resolve_fiber(C, G, E, e, a, 1, m, Fp, Gp, M, emb, True))
            else:
                for irr in poly.equal_degree(ctx, part, e):
                    K = QuotientField(ctx, irr)
                    take(_resolve_fiber(C, G, K, e, K.gen, K.one, m, Fp, Gp, M, K.from_base, False))
    entries = Counter()
    for (e, mult), c in closed.items():
        entries[(e, mult)] += c
    for _, mult in rational:
        entries[(1, mult)] += 1
    return (
        tuple(sorted((e, mult, c) for (e, mult), c in entries.items())),
        tuple(sorted(rational, key=lambda pm: order_key(pm[0]))),
    )


def _centers(C):
    pts = [t for t in triples(C.ctx) if C.F.evaluate(t) != 0]
    rng = random.Random(_CENTER_SEED)
    rng.shuffle(pts)
    return pts[:CENTER_RETRIES]


def frobenius_incidence(C):
    """Intersection divisor of C with V(x^q F_x + y^q F_y + z^q F_z)."""
    G = C.frobenius_form()
    if C.is_frobenius_nonclassical():
        raise FrobeniusNonClassical("F divides its Frobenius form; the incidence set is all of C")
    centers = _centers(C)
    for attempt, O in enumerate(centers, 1):
        try:
            entries, rational = _profile_for_center(C, G, O)
        except _Ambiguous:
            continue
        prof = FrobeniusProfile(C.d, C.q, entries, rational, O, attempt)
        if prof.total_degree != prof.expected_degree:
            raise AssertionError(
                f"divisor degree {prof.total_degree} != {prof.expected_degree}")
        if prof.rational_count != C.count_points(1):
            raise AssertionError("rational points of C missing from the divisor")
        return prof
    raise CoordinateChangeExhausted(
        f"no projection center among {len(centers)} candidates resolved every fiber")
