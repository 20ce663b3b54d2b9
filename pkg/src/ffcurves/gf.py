"""Finite fields GF(p^m) with p an odd prime.

Every field is built from a deterministic modulus: the monic irreducible of
degree m whose coefficient vector is least in lexicographic order (reading
from the t^(m-1) coefficient down).  Elements are plain ints packing the
coefficient vector of their residue class, ``c_0 + c_1 p + ... + c_{m-1} p^(m-1)``;
:class:`FieldElement` wraps such an int for the public API while the hot
kernels stay on ints.

Multiplication uses log/exp tables relative to the canonical generator
``g`` (the least primitive element); addition in proper extensions uses an
addition table for q <= 256 and Zech logarithms above that.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass

import numpy as np

from . import poly
from .errors import EvenCharacteristic, NotASubfield, NotPrime, SizeCapExceeded

DEFAULT_SIZE_CAP = 2 ** 20
_ADD_TABLE_MAX = 256


def size_cap():
    """Largest field cardinality allowed; overridable via ``FFCURVES_SIZE_CAP``."""
    raw = os.environ.get("FFCURVES_SIZE_CAP")
    return int(raw) if raw else DEFAULT_SIZE_CAP


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def prime_factors(n):
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


class PrimeField:
    """GF(p) arithmetic on ints, used to bootstrap modulus selection."""

    def __init__(self, p):
        self.p = self.char = self.order = p
        self.zero, self.one = 0, 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, n):
        return pow(a, n, self.p)

    def from_int(self, k):
        return k % self.p

    def random(self, rng):
        return rng.randrange(self.p)

    def sort_key(self, a):
        return a


def is_irreducible(p, f):
    """Rabin's test for a monic f (low-first coefficient list) over GF(p)."""
    F = PrimeField(p)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if poly.psub(F, _frob_power(F, x, p, m, f), x):
        return False
    for r in prime_factors(m):
        h = poly.psub(F, _frob_power(F, x, p, m // r, f), x)
        if len(poly.pgcd(F, h, f)) > 1:
            return False
    return True


def _frob_power(F, a, p, k, f):
    for _ in range(k):
        a = poly.ppowmod(F, a, p, f)
    return a


def _digits(n, p, m):
    out = []
    for _ in range(m):
        n, r = divmod(n, p)
        out.append(r)
    return out


def lex_least_irreducible(p, m):
    for n in range(p ** m):
        f = _digits(n, p, m) + [1]
        if is_irreducible(p, f):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldCtx:
    """Arithmetic context for GF(p^m); immutable after construction.

    Instances are cached per (p, m), so identity comparison is valid.
    """

    def __init__(self, p, m):
        self.p = self.char = p
        self.m = m
        self.q = self.order = p ** m
        self.modulus = lex_least_irreducible(p, m)
        self.zero, self.one = 0, 1
        self._pw = np.array([p ** i for i in range(m)], dtype=np.int64)
        self._build_tables()
        self._embeddings = {}

    # construction ---------------------------------------------------------

    def _digit_array(self, values):
        values = np.asarray(values, dtype=np.int64)
        return (values[..., None] // self._pw) % self.p

    def _slow_mul(self, a, b):
        F = PrimeField(self.p)
        prod = poly.pmul(F, poly.trim(_digits(a, self.p, self.m)), poly.trim(_digits(b, self.p, self.m)))
        rem = poly.pmod(F, prod, list(self.modulus))
        return sum(c * self.p ** i for i, c in enumerate(rem))

    def _slow_pow(self, a, n):
        r = 1
        while n:
            if n & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            n >>= 1
        return r

    def _mul_matrix(self, c):
        """Matrix of x -> c*x on digit vectors (rows: images of t^i)."""
        rows = []
        cur = c
        for _ in range(self.m):
            rows.append(_digits(cur, self.p, self.m))
            if self.m > 1:
                cur = self._slow_mul(cur, self.p)  # int p encodes t
        return np.array(rows, dtype=np.int64)

    def _find_generator(self):
        qm1 = self.q - 1
        if qm1 == 1:
            return 1
        factors = prime_factors(qm1)
        for g in range(1, self.q):
            if all(self._slow_pow(g, qm1 // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")  # unreachable

    def _build_tables(self):
        p, q, qm1 = self.p, self.q, self.q - 1
        self.generator = self._find_generator()
        block = min(qm1, 1024)
        first = [1]
        for _ in range(block - 1):
            first.append(self._slow_mul(first[-1], self.generator))
        exp = np.empty(qm1, dtype=np.int64)
        exp[:block] = first
        if block < qm1:
            step = self._mul_matrix(self._slow_pow(self.generator, block))
            cur = self._digit_array(exp[:block])
            pos = block
            while pos < qm1:
                cur = (cur @ step) % p
                take = min(block, qm1 - pos)
                exp[pos:pos + take] = (cur[:take] @ self._pw)
                pos += take
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(qm1, dtype=np.int64)
        self._np_exp = exp
        self._np_log = log
        d = self._digit_array(np.arange(q))
        self._np_neg = ((-d) % p) @ self._pw
        one_plus = d.copy()
        one_plus[:, 0] = (one_plus[:, 0] + 1) % p
        one_plus = one_plus @ self._pw
        zech = log[one_plus[exp]]  # -1 where 1 + g^n == 0
        self._np_zech = zech

        exp_l = exp.tolist()
        exp2 = exp_l + exp_l
        log_l = log.tolist()
        neg_l = self._np_neg.tolist()
        inv_l = [0] * q
        for k, v in enumerate(exp_l):
            inv_l[v] = exp_l[(-k) % qm1]
        self._exp, self._log, self._neg, self._inv = exp_l, log_l, neg_l, inv_l

        if self.m == 1:
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.mul = lambda a, b: a * b % p
            self.neg = lambda a: -a % p
        else:
            if q <= _ADD_TABLE_MAX:
                dd = (d[:, None, :] + d[None, :, :]) % p
                table = (dd @ self._pw).reshape(-1).tolist()
                self.add = lambda a, b: table[a * q + b]
                self.sub = lambda a, b: table[a * q + neg_l[b]]
            else:
                zech_l = zech.tolist()

                def add(a, b):
                    if a == 0:
                        return b
                    if b == 0:
                        return a
                    la = log_l[a]
                    n = log_l[b] - la
                    if n < 0:
                        n += qm1
                    z = zech_l[n]
                    if z < 0:
                        return 0
                    return exp2[la + z]

                self.add = add
                self.sub = lambda a, b: add(a, neg_l[b])

            def mul(a, b):
                if a == 0 or b == 0:
                    return 0
                return exp2[log_l[a] + log_l[b]]

            self.mul = mul
            self.neg = lambda a: neg_l[a]

    # scalar API -----------------------------------------------------------

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n == 0:
            return 1
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def log(self, a):
        """Discrete log to the canonical generator."""
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, k):
        return self._exp[k % (self.q - 1)]

    def from_int(self, k):
        return k % self.p

    def random(self, rng):
        return rng.randrange(self.q)

    def sort_key(self, a):
        return a

    def frobenius(self, a, s=1):
        """a^(p^s)."""
        if a == 0:
            return 0
        return self.pow(a, pow(self.p, s, self.q - 1) or (self.q - 1))

    def digits(self, a):
        return tuple(_digits(a, self.p, self.m))

    def from_digits(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != self.m or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"expected {self.m} digits in [0, {self.p})")
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    def elements(self):
        return range(self.q)

    def in_subfield(self, a, k):
        """True iff a lies in the subfield GF(p^k) (k | m)."""
        return self.frobenius(a, k) == a

    @property
    def is_prime_field(self):
        return self.m == 1

    def element(self, value):
        return FieldElement(self, value)

    # vectorized API (numpy int64 arrays) -----------------------------------

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        la, lb = self._np_log[a], self._np_log[b]
        out = self._np_exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pw:
            out += (((a // w) % self.p + (b // w) % self.p) % self.p) * w
        return out

    def vneg(self, a):
        return self._np_neg[np.asarray(a, dtype=np.int64)]

    def vpow(self, a, n):
        a = np.asarray(a, dtype=np.int64)
        if n == 0:
            return np.ones_like(a)
        out = self._np_exp[(self._np_log[a] * n) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    # text -----------------------------------------------------------------

    def format_element(self, a):
        if a < self.p:
            return str(a)
        k = self.log(a)
        return "g" if k == 1 else f"g^{k}"

    def modulus_text(self):
        return _poly_text(self.modulus, "t")

    def generator_text(self):
        return _poly_text(_digits(self.generator, self.p, self.m), "t")

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


def _poly_text(coeffs, var):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms) or "0"


@functools.lru_cache(maxsize=None)
def _field(p, m):
    return FieldCtx(p, m)


def field_create(p, m=1):
    """The field GF(p^m) with its deterministic modulus.

    Raises EvenCharacteristic for p = 2, NotPrime for composite p and
    SizeCapExceeded when p^m is above :func:`size_cap`.
    """
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported (p > 2 required)")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be positive")
    if p ** m > size_cap():
        raise SizeCapExceeded(f"GF({p}^{m}) exceeds the size cap {size_cap()}")
    return _field(p, m)


def extension(ctx, e):
    """GF(q^e) for q = |ctx|."""
    return field_create(ctx.p, ctx.m * e)


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldCtx
    value: int

    @property
    def coeffs(self):
        return self.ctx.digits(self.value)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.div(self.value, o))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, n):
        return FieldElement(self.ctx, self.ctx.pow(self.value, n))

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return self.ctx.format_element(self.value)


def frobenius_power(x, s):
    """x^(p^s); with s = m the q-Frobenius, which fixes GF(q) pointwise."""
    if s < 0:
        raise ValueError("s must be non-negative")
    return FieldElement(x.ctx, x.ctx.frobenius(x.value, s))


def embedding_table(source, target):
    """List mapping every int of ``source`` to its image in ``target``.

    The image of t is the least root (in int order) of the source modulus in
    the target; the map is cached per (source, target).
    """
    if target.p != source.p or target.m % source.m:
        raise NotASubfield(f"{source!r} is not a subfield of {target!r}")
    key = (source.p, source.m)
    table = target._embeddings.get(key)
    if table is not None:
        return table
    if source.m == 1:
        table = list(range(source.p))
    else:
        rs = poly.roots(target, list(source.modulus))
        root = rs[0]
        powers = [1]
        for _ in range(source.m - 1):
            powers.append(target.mul(powers[-1], root))
        table = []
        for v in range(source.q):
            acc = 0
            for c, pw in zip(_digits(v, source.p, source.m), powers):
                if c:
                    acc = target.add(acc, target.mul(c, pw))
            table.append(acc)
    target._embeddings[key] = table
    return table


def embed(x, target):
    """Ring-homomorphic injection of x into a larger field of the same characteristic."""
    return FieldElement(target, embedding_table(x.ctx, target)[x.value])


def restriction_table(source, target):
    """Inverse of :func:`embedding_table` as a dict on the image."""
    return {v: i for i, v in enumerate(embedding_table(source, target))}


class QuotientField:
    """GF(q)[t]/(h) for an irreducible h over a FieldCtx.

    Elements are trimmed tuples of base ints (zero is ``()``).  No size cap
    applies: nothing is tabulated.
    """

    def __init__(self, base, h):
        self.base = base
        self.h = list(poly.pmonic(base, h))
        self.e = len(self.h) - 1
        self.char = base.char
        self.order = base.order ** self.e
        self.zero = ()
        self.one = (1,)
        self.gen = tuple(poly.pmod(base, [0, 1], self.h))

    def add(self, a, b):
        return tuple(poly.padd(self.base, list(a), list(b)))

    def sub(self, a, b):
        return tuple(poly.psub(self.base, list(a), list(b)))

    def neg(self, a):
        return tuple(poly.pneg(self.base, list(a)))

    def mul(self, a, b):
        if not a or not b:
            return ()
        return tuple(poly.pmod(self.base, poly.pmul(self.base, list(a), list(b)), self.h))

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        B = self.base
        r0, r1 = self.h, list(a)
        s0, s1 = [], [1]
        while len(r1) > 1:
            qt, r = poly.pdivmod(B, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly.psub(B, s0, poly.pmul(B, qt, s1))
        c = B.inv(r1[0])
        return tuple(poly.pmod(B, poly.pscale(B, s1, c), self.h))

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        out = self.one
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def reduce(self, coeffs):
        return tuple(poly.pmod(self.base, poly.trim(list(coeffs)), self.h))

    def from_base(self, c):
        return (c,) if c else ()

    def from_int(self, k):
        return self.from_base(self.base.from_int(k))

    def random(self, rng):
        return tuple(poly.trim([self.base.random(rng) for _ in range(self.e)]))

    def sort_key(self, a):
        return (len(a), tuple(reversed(a)))

