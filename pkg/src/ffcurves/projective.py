"""Points and lines of the projective plane over a finite field.

Coordinates are normalized so the first nonzero entry is 1.  The global
order used everywhere (enumeration, tie-breaking, line bases) lists
``[1:a:b]`` first (lexicographic in a, b), then ``[0:1:b]``, then
``[0:0:1]``; points and lines share it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import CoincidentPoints


def normalize(ctx, coords):
    coords = tuple(coords)
    for c in coords:
        if c:
            if c == 1:
                return coords
            inv = ctx.inv(c)
            return tuple(ctx.mul(x, inv) for x in coords)
    raise ValueError("the zero vector is not a projective point")


def order_key(coords):
    """Sort key for normalized triples in the global order."""
    lead = next(i for i, c in enumerate(coords) if c)
    return (lead,) + tuple(coords[lead + 1:])


def triples(ctx):
    """All normalized triples over ``ctx`` in the global order."""
    q = ctx.q
    for a in range(q):
        for b in range(q):
            yield (1, a, b)
    for b in range(q):
        yield (0, 1, b)
    yield (0, 0, 1)


def dot(ctx, u, v):
    add, mul = ctx.add, ctx.mul
    return add(add(mul(u[0], v[0]), mul(u[1], v[1])), mul(u[2], v[2]))


def cross(ctx, u, v):
    sub, mul = ctx.sub, ctx.mul
    return (
        sub(mul(u[1], v[2]), mul(u[2], v[1])),
        sub(mul(u[2], v[0]), mul(u[0], v[2])),
        sub(mul(u[0], v[1]), mul(u[1], v[0])),
    )


def residue_degree(ctx, coords, base):
    """Least e with every normalized coordinate in GF(|base|^e)."""
    total = ctx.m // base.m
    for e in range(1, total + 1):
        if total % e:
            continue
        k = base.m * e
        if all(ctx.frobenius(c, k) == c for c in coords):
            return e
    return total


@dataclass(frozen=True)
class ProjPoint:
    """A point with normalized coordinates (ints of ``ctx``).

    ``residue_degree`` is measured over the curve's base field, which may be
    a proper subfield of ``ctx``.
    """

    ctx: object
    coords: tuple
    residue_degree: int = 1

    @classmethod
    def make(cls, ctx, coords, base=None):
        coords = normalize(ctx, coords)
        e = residue_degree(ctx, coords, base) if base is not None and base is not ctx else 1
        return cls(ctx, coords, e)

    def key(self):
        return order_key(self.coords)

    def text(self):
        return "[" + ":".join(self.ctx.format_element(c) for c in self.coords) + "]"

    def __repr__(self):
        return f"ProjPoint{self.text()}"


@dataclass(frozen=True)
class ProjLine:
    """A line a*x + b*y + c*z = 0 given by normalized dual coordinates."""

    ctx: object
    coords: tuple

    @classmethod
    def make(cls, ctx, coords):
        return cls(ctx, normalize(ctx, coords))

    def key(self):
        return order_key(self.coords)

    @cached_property
    def basis(self):
        """The first two points of the line in the global order."""
        F = self.ctx
        a, b, c = self.coords
        if c:
            ic = F.neg(F.inv(c))
            return ((1, 0, F.mul(a, ic)), (1, 1, F.mul(F.add(a, b), ic)))
        if b:
            y = F.neg(F.div(a, b))
            return ((1, y, 0), (1, y, 1))
        return ((0, 1, 0), (0, 1, 1))

    def contains(self, coords):
        return dot(self.ctx, self.coords, coords) == 0

    def points(self):
        """All rational points of the line, in the global order."""
        F = self.ctx
        A, B = self.basis
        pts = {normalize(F, A)}
        for s in range(F.q):
            pts.add(normalize(F, tuple(F.add(F.mul(s, x), y) for x, y in zip(A, B))))
        return sorted(pts, key=order_key)

    def point_at(self, s, t):
        """Coordinates of s*A + t*B, normalized."""
        F = self.ctx
        A, B = self.basis
        return normalize(F, tuple(F.add(F.mul(s, x), F.mul(t, y)) for x, y in zip(A, B)))

    def text(self):
        return "[" + ":".join(self.ctx.format_element(c) for c in self.coords) + "]"

    def equation(self):
        names = ("x", "y", "z")
        terms = []
        for c, v in zip(self.coords, names):
            if c == 0:
                continue
            terms.append(v if c == 1 else f"{self.ctx.format_element(c)}*{v}")
        return " + ".join(terms) + " = 0"

    def __repr__(self):
        return f"ProjLine{self.text()}"


def all_points(ctx):
    return [ProjPoint(ctx, t) for t in triples(ctx)]


def all_lines(ctx):
    """The q^2 + q + 1 lines over ``ctx`` in the global order of dual coordinates."""
    return [ProjLine(ctx, t) for t in triples(ctx)]


def line_through(P1, P2):
    ctx = P1.ctx
    if P1.coords == P2.coords:
        raise CoincidentPoints("a line needs two distinct points")
    return ProjLine.make(ctx, cross(ctx, P1.coords, P2.coords))
