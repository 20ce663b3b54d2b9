"""Dense univariate polynomials over a finite field object.

A polynomial is a list of field elements, lowest degree first, with no
trailing zeros; ``[]`` is the zero polynomial.  The field object only needs
``zero``, ``one``, ``add``, ``sub``, ``mul``, ``neg``, ``inv``, ``pow``,
``order`` (cardinality) and ``char``.  Both :class:`ffcurves.gf.FieldCtx`
and :class:`ffcurves.gf.QuotientField` satisfy this protocol.
"""

from __future__ import annotations

import random

import numpy as np

__all__ = [
    "trim", "deg", "padd", "psub", "pneg", "pscale", "pmul", "pdivmod",
    "pmod", "pquo", "pmonic", "pgcd", "pderiv", "ppowmod", "peval",
    "pth_root", "squarefree_decomposition", "distinct_degree",
    "equal_degree", "factor", "roots", "root_multiplicity", "resultant",
]

# fixed seed: splitting is randomized but its output (the set of factors) is not
_SPLIT_SEED = 0x5EED


def trim(a):
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return a[:n] if n != len(a) else a


def _is_zero(c):
    # field elements are ints or tuples; zero is 0 or ()
    return not c


def _prime_modulus(F):
    """p when F is a tabulated prime field (numpy fast paths apply), else None."""
    return F.p if getattr(F, "m", 0) == 1 else None


def deg(a):
    return len(a) - 1


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    add = F.add
    for i, c in enumerate(b):
        out[i] = add(out[i], c)
    return trim(out)


def psub(F, a, b):
    out = list(a) + [F.zero] * max(0, len(b) - len(a))
    sub = F.sub
    for i, c in enumerate(b):
        out[i] = sub(out[i], c)
    return trim(out)


def pneg(F, a):
    return [F.neg(c) for c in a]


def pscale(F, a, c):
    if _is_zero(c):
        return []
    mul = F.mul
    return trim([mul(x, c) for x in a])


def pmul(F, a, b):
    if not a or not b:
        return []
    p = _prime_modulus(F)
    if p is not None and min(len(a), len(b)) > 8:
        out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p
        return trim(out.tolist())
    add, mul, zero = F.add, F.mul, F.zero
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _is_zero(x):
            continue
        for j, y in enumerate(b):
            if not _is_zero(y):
                out[i + j] = add(out[i + j], mul(x, y))
    return trim(out)


def pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) <= db:
        return [], list(a)
    p = _prime_modulus(F)
    if p is not None and db > 8:
        return _pdivmod_prime(p, a, b)
    r = list(a)
    inv_lc = F.inv(b[-1])
    sub, mul = F.sub, F.mul
    qt = [F.zero] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = r[k + db]
        if _is_zero(c):
            continue
        c = mul(c, inv_lc)
        qt[k] = c
        for j in range(db + 1):
            if not _is_zero(b[j]):
                r[k + j] = sub(r[k + j], mul(c, b[j]))
    return trim(qt), trim(r[:db])


def _pdivmod_prime(p, a, b):
    db = len(b) - 1
    r = np.asarray(a, dtype=np.int64)
    bb = np.asarray(b, dtype=np.int64)
    inv_lc = pow(int(bb[-1]), p - 2, p)
    qt = np.zeros(len(a) - db, dtype=np.int64)
    for k in range(len(a) - 1 - db, -1, -1):
        c = int(r[k + db]) * inv_lc % p
        if c:
            qt[k] = c
            r[k:k + db + 1] = (r[k:k + db + 1] - c * bb) % p
    return trim(qt.tolist()), trim(r[:db].tolist())


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pquo(F, a, b):
    qt, r = pdivmod(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return qt


def pmonic(F, a):
    if not a:
        return []
    if a[-1] == F.one:
        return list(a)
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F, a, b):
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pderiv(F, a):
    p = F.char
    out = []
    for i in range(1, len(a)):
        k = i % p
        if k == 0 or _is_zero(a[i]):
            out.append(F.zero)
        else:
            out.append(F.mul(a[i], F.from_int(k)))
    return trim(out)


def ppowmod(F, a, n, m):
    """a^n mod m by square-and-multiply."""
    result = [F.one]
    base = pmod(F, a, m)
    while n:
        if n & 1:
            result = pmod(F, pmul(F, result, base), m)
        n >>= 1
        if n:
            base = pmod(F, pmul(F, base, base), m)
    return result


def peval(F, a, x):
    acc = F.zero
    add, mul = F.add, F.mul
    for c in reversed(a):
        acc = add(mul(acc, x), c)
    return acc


def pth_root(F, a):
    """The polynomial b with b^p = a; requires a' = 0."""
    p = F.char
    e = F.order // p
    out = []
    for i in range(0, len(a), p):
        out.append(F.pow(a[i], e))
    return trim(out)


def squarefree_decomposition(F, f):
    """Monic squarefree factors with multiplicities, ``[(h, m), ...]``.

    Characteristic-p aware: a vanishing derivative triggers p-th root
    extraction, so multiplicities divisible by p come out correctly.
    """
    f = pmonic(F, f)
    if len(f) <= 1:
        return []
    out = {}
    i = 1
    g = pgcd(F, f, pderiv(F, f))
    w = pquo(F, f, g)
    while len(w) > 1:
        y = pgcd(F, w, g)
        z = pquo(F, w, y)
        if len(z) > 1:
            out[i] = z
        i += 1
        w = y
        g = pquo(F, g, y)
    if len(g) > 1:
        for h, m in squarefree_decomposition(F, pth_root(F, g)):
            k = m * F.char
            out[k] = pmul(F, out[k], h) if k in out else h
    return sorted(((h, m) for m, h in out.items()), key=lambda t: t[1])


def distinct_degree(F, f):
    """Split a monic squarefree f into ``[(e, product of degree-e irreducibles)]``."""
    f = pmonic(F, f)
    out = []
    x = [F.zero, F.one]
    w = list(x)
    e = 0
    Q = F.order
    while len(f) - 1 >= 2 * (e + 1):
        e += 1
        w = ppowmod(F, w, Q, f)
        g = pgcd(F, f, psub(F, w, x))
        if len(g) > 1:
            out.append((e, g))
            f = pquo(F, f, g)
            w = pmod(F, w, f)
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def _random_poly(F, n, rng):
    return trim([F.random(rng) for _ in range(n)])


def equal_degree(F, f, e, rng=None):
    """Cantor-Zassenhaus: irreducible monic factors of a product of degree-e irreducibles."""
    f = pmonic(F, f)
    n = len(f) - 1
    if n == e:
        return [f]
    if n == 0:
        return []
    rng = rng or random.Random(_SPLIT_SEED)
    exp = (F.order ** e - 1) // 2
    while True:
        a = _random_poly(F, n, rng)
        if len(a) < 2:
            continue
        g = pgcd(F, a, f)
        if 1 < len(g) < len(f):
            break
        b = psub(F, ppowmod(F, a, exp, f), [F.one])
        g = pgcd(F, b, f)
        if 1 < len(g) < len(f):
            break
    return equal_degree(F, g, e, rng) + equal_degree(F, pquo(F, f, g), e, rng)


def _key(F, h):
    return (len(h), [F.sort_key(c) for c in reversed(h)])


def factor(F, f):
    """Complete factorization into monic irreducibles, ``[(h, m), ...]`` sorted."""
    out = []
    for h, m in squarefree_decomposition(F, f):
        for e, g in distinct_degree(F, h):
            for irr in equal_degree(F, g, e):
                out.append((irr, m))
    out.sort(key=lambda t: (_key(F, t[0]), t[1]))
    return out


def roots(F, f):
    """Distinct roots of f lying in F, sorted by the field's element order."""
    f = pmonic(F, f)
    if len(f) <= 1:
        return []
    x = [F.zero, F.one]
    g = pgcd(F, f, psub(F, ppowmod(F, x, F.order, f), x))
    if len(g) <= 1:
        return []
    rs = [F.neg(h[0]) for h in equal_degree(F, g, 1)]
    return sorted(rs, key=F.sort_key)


def root_multiplicity(F, f, r):
    """Multiplicity of r as a root of nonzero f (repeated synthetic division)."""
    m = 0
    while f and _is_zero(peval(F, f, r)):
        f, rem = pdivmod(F, f, [F.neg(r), F.one])
        m += 1
    return m


def resultant(F, f, g, df=None, dg=None):
    """Sylvester-determinant resultant with formal degrees ``df``, ``dg``.

    Coefficients are taken in descending powers and f-rows come first.
    """
    df = len(f) - 1 if df is None else df
    dg = len(g) - 1 if dg is None else dg
    n = df + dg
    if n == 0:
        return F.one
    fc = [f[i] if i < len(f) else F.zero for i in range(df, -1, -1)]
    gc = [g[i] if i < len(g) else F.zero for i in range(dg, -1, -1)]
    rows = []
    for i in range(dg):
        rows.append([F.zero] * i + fc + [F.zero] * (n - i - df - 1))
    for i in range(df):
        rows.append([F.zero] * i + gc + [F.zero] * (n - i - dg - 1))
    return determinant(F, rows)


def determinant(F, rows):
    """Determinant by Gaussian elimination (rows are consumed)."""
    n = len(rows)
    det = F.one
    sub, mul = F.sub, F.mul
    for c in range(n):
        piv = next((r for r in range(c, n) if not _is_zero(rows[r][c])), None)
        if piv is None:
            return F.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = F.neg(det)
        pr = rows[c]
        det = mul(det, pr[c])
        inv = F.inv(pr[c])
        for r in range(c + 1, n):
            row = rows[r]
            if _is_zero(row[c]):
                continue
            k = mul(row[c], inv)
            for j in range(c, n):
                if not _is_zero(pr[j]):
                    row[j] = sub(row[j], mul(k, pr[j]))
    return det
