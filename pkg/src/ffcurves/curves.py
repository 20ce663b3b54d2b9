"""Plane curves over GF(q): smoothness, tangents, flexes, reflexivity,
Frobenius non-classicality, dual degree, contact orders and point counts.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import poly
from .errors import (
    DegreeMismatch,
    InsufficientSamplePoints,
    NonIntegralDualDegree,
    NonReflexive,
    PointNotOnCurve,
    SingularPoint,
    SizeCapExceeded,
    ZeroForm,
)
from .forms import (
    TernaryForm,
    bordered_hessian,
    divides,
    frobenius_form,
    monomials,
    partials,
    restrict,
)
from .gf import embedding_table, extension, field_create, prime_factors, size_cap
from .projective import ProjLine, ProjPoint, cross, normalize, order_key

# largest number of plane points enumerated in one count or scan
POINT_SCAN_CAP = 1 << 24
# witness search stops once P^2(GF(q^e)) would exceed this many points
WITNESS_SCAN_CAP = 1 << 22

CONTACT_SAMPLES = 20
CONTACT_EXTENSIONS = (2, 3)
_CONTACT_SEED = 0xC0DE


# linear algebra over GF(q) -------------------------------------------------

def matrix_rank(ctx, M, stop=None):
    """Rank of an int matrix over ``ctx`` by Gaussian elimination.

    Stops early once the rank reaches ``stop``.
    """
    M = np.array(M, dtype=np.int64, copy=True)
    rows, cols = M.shape
    stop = min(rows, cols) if stop is None else stop
    rank = 0
    prime = ctx.m == 1
    p = ctx.p
    for col in range(cols):
        if rank == stop or rank == rows:
            break
        nz = np.nonzero(M[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        inv = ctx.inv(int(M[rank, col]))
        if prime:
            M[rank] = (M[rank] * inv) % p
        else:
            M[rank] = ctx.vmul(M[rank], inv)
        below = M[rank + 1:]
        f = below[:, col]
        hit = np.nonzero(f)[0]
        if hit.size:
            pivot_row = M[rank]
            if prime:
                below[hit] = (below[hit] - f[hit, None] * pivot_row[None, :]) % p
            else:
                prod = ctx.vmul(f[hit, None], pivot_row[None, :])
                below[hit] = ctx.vadd(below[hit], ctx.vneg(prod))
        rank += 1
    return rank


def _macaulay_full(gens, D):
    """True iff the ideal generated by ``gens`` contains every form of degree D."""
    ctx = gens[0].ctx
    cols = {m: i for i, m in enumerate(monomials(D))}
    rows = []
    for g in gens:
        if g.is_zero or g.degree > D:
            continue
        items = list(g.terms.items())
        for mu in monomials(D - g.degree):
            row = {}
            for (a, b, c), v in items:
                row[cols[(a + mu[0], b + mu[1], c + mu[2])]] = v
            rows.append(row)
    if len(rows) < len(cols):
        return False
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, v in row.items():
            M[i, j] = v
    return matrix_rank(ctx, M, stop=len(cols)) == len(cols)


# plane enumeration ---------------------------------------------------------

def _plane_chunks(E, chunk=1 << 20):
    """Yield (X, Y, Z) int arrays covering P^2(E) in the global order."""
    Q = E.q
    b = np.arange(Q, dtype=np.int64)
    per = max(1, chunk // Q)
    for a0 in range(0, Q, per):
        a = np.arange(a0, min(Q, a0 + per), dtype=np.int64)
        Y = np.repeat(a, Q)
        Z = np.tile(b, a.size)
        yield np.ones_like(Y), Y, Z
    yield np.zeros(Q, dtype=np.int64), np.ones(Q, dtype=np.int64), b
    yield np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64), np.ones(1, dtype=np.int64)


def _plane_size(Q):
    return Q * Q + Q + 1


@dataclass
class SmoothnessResult:
    smooth: bool
    witness: ProjPoint | None = None

    def __bool__(self):
        return self.smooth


class PlaneCurve:
    """The curve F = 0 over the field of F, with write-once cached flags."""

    def __init__(self, F, name=None):
        if F.is_zero:
            raise ZeroForm("a curve needs a nonzero form")
        if F.degree < 1:
            raise ValueError("a curve needs degree >= 1")
        self.F = F
        self.ctx = F.ctx
        self.d = F.degree
        self.q = F.ctx.q
        self.name = name
        self._cache = {}

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"PlaneCurve({label}{self.F.to_text()} over {self.ctx!r})"

    def __eq__(self, other):
        return isinstance(other, PlaneCurve) and self.F == other.F

    def __hash__(self):
        return hash(self.F)

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def flags(self):
        """Tri-state cached flags: True, False or None (not yet computed)."""
        out = {}
        for key in ("smooth", "reflexive", "fnc"):
            v = self._cache.get(key)
            out[key] = None if v is None else bool(v)
        return out

    @property
    def partials(self):
        return self._cached("partials", lambda: partials(self.F))

    # points ---------------------------------------------------------------

    def evaluate_on_plane(self, e=1, forms=None):
        """Yield (X, Y, Z, values) over P^2(GF(q^e)) for each of ``forms``."""
        E = self.ctx if e == 1 else extension(self.ctx, e)
        forms = forms or [self.F]
        for X, Y, Z in _plane_chunks(E):
            yield E, X, Y, Z, [g.evaluate_many(X, Y, Z, E) for g in forms]

    def points_over(self, e=1):
        """Points of C over GF(q^e) (coordinates in that field), in the global order."""
        E = self.ctx if e == 1 else extension(self.ctx, e)
        if _plane_size(E.q) > POINT_SCAN_CAP:
            raise SizeCapExceeded(f"enumerating P^2 over {E!r} exceeds the scan cap")
        out = []
        for E, X, Y, Z, (v,) in self.evaluate_on_plane(e):
            idx = np.nonzero(v == 0)[0]
            for i in idx.tolist():
                coords = (int(X[i]), int(Y[i]), int(Z[i]))
                out.append(ProjPoint.make(E, coords, self.ctx))
        return out

    def rational_points(self):
        return self._cached("rational_points", lambda: self.points_over(1))

    def contains(self, P):
        return self.F.evaluate(P.coords, P.ctx) == 0

    def count_points(self, e=1):
        """#C(GF(q^e)) by enumerating the plane."""
        if e < 1:
            raise ValueError("extension degree must be positive")
        Q = self.q ** e
        if Q > size_cap() or _plane_size(Q) > POINT_SCAN_CAP:
            raise SizeCapExceeded(f"counting over GF({Q}) exceeds the size cap")
        if e == 1 and "rational_points" in self._cache:
            return len(self._cache["rational_points"])
        return sum(int(np.count_nonzero(v == 0)) for *_, (v,) in self.evaluate_on_plane(e))

    def is_plane_filling(self):
        if self.d <= self.q:
            return False
        return self.count_points(1) == _plane_size(self.q)

    # smoothness -----------------------------------------------------------

    def is_smooth(self):
        return self._cached("smooth", self._smoothness).smooth

    def smoothness(self):
        """Smoothness verdict with a singular witness when one is located."""
        return self._cached("smooth", self._smoothness)

    def _smoothness(self):
        d, p = self.d, self.ctx.p
        if d == 1:
            return SmoothnessResult(True)
        Fx, Fy, Fz = self.partials
        if d % p:
            # the partials alone cut out the singular locus (Euler)
            ok = _macaulay_full([Fx, Fy, Fz], 3 * d - 5)
        else:
            ok = _macaulay_full([self.F, Fx, Fy, Fz], 3 * d - 2)
        if ok:
            return SmoothnessResult(True)
        return SmoothnessResult(False, self.singular_witness())

    def singular_witness(self):
        """First singular point over GF(q^e) for e = 1, 2, ... within the scan cap."""
        forms = [self.F, *self.partials]
        e = 1
        while _plane_size(self.q ** e) <= WITNESS_SCAN_CAP and self.q ** e <= size_cap():
            for E, X, Y, Z, vals in self.evaluate_on_plane(e, forms):
                mask = np.ones(X.shape, dtype=bool)
                for v in vals:
                    mask &= v == 0
                idx = np.nonzero(mask)[0]
                if idx.size:
                    i = int(idx[0])
                    return ProjPoint.make(E, (int(X[i]), int(Y[i]), int(Z[i])), self.ctx)
            e += 1
        return None

    def is_singular_at(self, P):
        return all(g.evaluate(P.coords, P.ctx) == 0 for g in (self.F, *self.partials))

    # tangents and flexes --------------------------------------------------

    def gradient(self, P):
        return tuple(g.evaluate(P.coords, P.ctx) for g in self.partials)

    def tangent_line(self, P):
        """Tangent line at a smooth point, over the field of P's coordinates."""
        if not self.contains(P):
            raise PointNotOnCurve(f"{P.text()} is not on the curve")
        grad = self.gradient(P)
        if not any(grad):
            raise SingularPoint(f"{P.text()} is a singular point")
        L = ProjLine.make(P.ctx, grad)
        if not L.contains(P.coords):  # cannot happen on a curve point
            raise AssertionError("tangent line misses its point")
        return L

    def contact_order(self, P, L=None):
        """Intersection multiplicity at P of C with the line L (default: tangent)."""
        L = L or self.tangent_line(P)
        E = P.ctx
        lead = next(i for i, c in enumerate(P.coords) if c)
        axis = [0, 0, 0]
        axis[lead] = 1
        other = normalize(E, cross(E, L.coords, tuple(axis)))
        g = restrict(self.F, P.coords, other, E)
        if g.is_zero:
            return math.inf
        return self.d - (len(g.dehomogenized()) - 1)

    def flex_form(self):
        return self._cached("flex_form", lambda: bordered_hessian(self.F, 2))

    def is_reflexive(self):
        """True iff C has finitely many flexes (decided by the flex form in z != 0)."""

        def compute():
            B = self.flex_form()
            return not B.is_zero and not divides(self.F, B)

        return self._cached("reflexive", compute)

    def rational_flexes(self):
        """Rational points whose tangent meets C there with multiplicity >= 3."""
        if not self.is_reflexive():
            raise NonReflexive("a non-reflexive curve has infinitely many flexes")
        return [P for P in self.rational_points() if self.contact_order(P) >= 3]

    # Frobenius -------------------------------------------------------------

    def frobenius_form(self):
        return self._cached("frobenius_form", lambda: frobenius_form(self.F))

    def is_frobenius_nonclassical(self):
        return self._cached("fnc", lambda: divides(self.F, self.frobenius_form()))

    # contact order and dual degree ---------------------------------------

    def sample_points(self, e, count, rng):
        """Up to ``count`` distinct non-rational points of C over GF(q^e)."""
        E = extension(self.ctx, e)
        table = embedding_table(self.ctx, E)
        coeffs_y = {}
        for (i, j, k), v in self.F.terms.items():
            coeffs_y.setdefault((i, k), {})[j] = table[v]
        found = {}
        tries = 0
        while len(found) < count and tries < 40 * count:
            tries += 1
            a = E.random(rng)
            f = [0] * (self.d + 1)
            for (i, k), by_j in coeffs_y.items():
                w = E.pow(a, i)
                for j, v in by_j.items():
                    f[j] = E.add(f[j], E.mul(v, w))
            f = poly.trim(f)
            if len(f) <= 1:
                continue
            for r in poly.roots(E, f):
                P = ProjPoint.make(E, (a, r, 1), self.ctx)
                if P.residue_degree > 1 and P.coords not in found and any(self.gradient(P)):
                    found[P.coords] = P
        pts = sorted(found.values(), key=lambda P: order_key(P.coords))
        return pts[:count]

    def contact_samples(self):
        """Sampled tangency multiplicities at non-rational points, per extension.

        Extensions 2 and 3 are always sampled; higher ones only while fewer
        than CONTACT_SAMPLES points have been found.
        """

        def compute():
            rng = random.Random(_CONTACT_SEED)
            out = {}
            total = 0
            e = 1
            while True:
                e += 1
                if self.q ** e > size_cap():
                    break
                if e > CONTACT_EXTENSIONS[-1] and total >= CONTACT_SAMPLES:
                    break
                pts = self.sample_points(e, CONTACT_SAMPLES, rng)
                out[e] = [self.contact_order(P) for P in pts]
                total += len(pts)
            if total < CONTACT_SAMPLES:
                raise InsufficientSamplePoints(f"only {total} non-rational sample points found")
            return out

        return self._cached("contact_samples", compute)

    def generic_contact_order(self):
        """Least tangency multiplicity seen at sampled non-rational points."""
        samples = self.contact_samples()
        return min(m for ms in samples.values() for m in ms)

    def dual_degree(self):
        """d(d-1) if reflexive, else d(d-1)/q' with q' the generic contact order."""
        n = self.d * (self.d - 1)
        if self.is_reflexive():
            return n
        qq = self.generic_contact_order()
        if n % qq:
            raise NonIntegralDualDegree(f"{n} is not divisible by the contact order {qq}")
        return n // qq


# constructors ----------------------------------------------------------------

def pardini_form(a, b, c):
    """The curve a^p x + b^p y + c^p z for forms a, b, c of a common degree t."""
    degs = {f.degree for f in (a, b, c)}
    if len(degs) != 1:
        raise DegreeMismatch("a, b, c must have the same degree")
    if a.ctx is not b.ctx or a.ctx is not c.ctx:
        raise ValueError("forms over different fields")
    if a.is_zero and b.is_zero and c.is_zero:
        raise ZeroForm("a, b, c are all zero")
    ctx = a.ctx
    out = TernaryForm(ctx, a.degree * ctx.p + 1)
    for f, mono in zip((a, b, c), ((1, 0, 0), (0, 1, 0), (0, 0, 1))):
        if not f.is_zero:
            out = out + f.frobenius_twist(1) * TernaryForm.monomial(ctx, mono)
    return PlaneCurve(out)


def fermat_form(ctx, n):
    return TernaryForm(ctx, n, {(n, 0, 0): 1, (0, n, 0): 1, (0, 0, n): 1})


def hermitian_family(q0, n):
    """x^k + y^k + z^k, k = (q0^n - 1)/(q0 - 1), over GF(q0^n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    ps = prime_factors(q0) if q0 > 1 else []
    if len(ps) != 1:
        raise ValueError(f"{q0} is not a prime power")
    p = ps[0]
    s = round(math.log(q0, p))
    if p ** s != q0:
        raise ValueError(f"{q0} is not a prime power")
    ctx = field_create(p, s * n)
    k = (q0 ** n - 1) // (q0 - 1)
    return PlaneCurve(fermat_form(ctx, k), name=f"hermitian-{q0}-{n}")


def random_form(ctx, d, rng):
    return TernaryForm(ctx, d, {m: ctx.random(rng) for m in monomials(d)})


def contact_histogram(samples):
    return dict(sorted(Counter(m for ms in samples.values() for m in ms).items()))


__all__ = [
    "PlaneCurve", "SmoothnessResult", "pardini_form", "hermitian_family",
    "fermat_form", "random_form", "matrix_rank", "contact_histogram",
]
