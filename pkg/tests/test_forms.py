import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ffcurves import field_create
from ffcurves.curves import PlaneCurve, random_form
from ffcurves.errors import DegenerateLeadingCoefficient, ZeroForm
from ffcurves.forms import (
    BinaryForm,
    TernaryForm,
    bordered_hessian,
    divides,
    factor_profile,
    frobenius_form,
    hessian,
    monomials,
    partials,
    rational_roots,
    restrict_to_line,
    resultant,
    resultant_eliminate,
)
from ffcurves.gf import embedding_table, extension
from ffcurves.io import parse_form
from ffcurves.projective import ProjLine
from oracles import brute_points, brute_profile

F3, F5, F7, F9 = (field_create(3), field_create(5), field_create(7), field_create(3, 2))


def form(text, ctx):
    return parse_form(text, ctx)


def binary(ctx, coeffs):
    return BinaryForm(ctx, len(coeffs) - 1, tuple(c % ctx.p if ctx.m == 1 else c for c in coeffs))


def b_partial_s(g):
    F = g.ctx
    c = [F.mul(F.from_int(i), g.coeffs[i]) for i in range(1, g.degree + 1)]
    return BinaryForm(F, g.degree - 1, tuple(c))


def b_partial_t(g):
    F = g.ctx
    d = g.degree
    c = [F.mul(F.from_int(d - i), g.coeffs[i]) for i in range(d)]
    return BinaryForm(F, d - 1, tuple(c))


def profile(g):
    return [tuple(e) for e in factor_profile(g).as_lists()]


# ternary form basics ---------------------------------------------------------

def test_monomials_order_and_count():
    ms = monomials(3)
    assert len(ms) == 10
    assert ms[0] == (3, 0, 0) and ms[-1] == (0, 0, 3)
    assert all(sum(m) == 3 for m in ms)


def test_stored_terms_are_nonzero_and_homogeneous():
    F = TernaryForm(F5, 2, {(2, 0, 0): 1, (1, 1, 0): 0})
    assert F.terms == {(2, 0, 0): 1}
    with pytest.raises(ValueError):
        TernaryForm(F5, 2, {(1, 0, 0): 1})


def test_arithmetic_and_text():
    x, y, z = (TernaryForm.linear(F5, *v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    F = x * x + y * y * 3 - z * z
    assert F.to_text() == "x^2 + 3*y^2 + 4*z^2"
    assert (x + y) ** 2 == x * x + x * y * 2 + y * y
    assert (F - F).is_zero


def test_char_p_derivative():
    F = form("x^3", F3)
    assert F.partial(0).is_zero
    Fx, Fy, Fz = partials(form("x^2*y + z^3", F5))
    assert Fx == form("2*x*y", F5)
    assert Fy == form("x^2", F5)
    assert Fz == form("3*z^2", F5)


def test_frobenius_form_of_conic():
    F = form("x^2 + y^2 + z^2", F3)
    G = frobenius_form(F)
    assert G == form("2*x^4 + 2*y^4 + 2*z^4", F3)
    assert G.degree == 3 + 2 - 1


def test_compose_with_identity_and_swap():
    F = form("x^2*y + 2*y*z^2 + z^3", F5)
    I = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert F.compose(I) == F
    swap = [(0, 1, 0), (1, 0, 0), (0, 0, 1)]
    assert F.compose(swap) == form("y^2*x + 2*x*z^2 + z^3", F5)


def test_evaluate_many_matches_scalar():
    import numpy as np

    rng = random.Random(3)
    F = random_form(F9, 4, rng)
    pts = [tuple(rng.randrange(9) for _ in range(3)) for _ in range(50)]
    X, Y, Z = (np.array(c) for c in zip(*pts))
    vals = F.evaluate_many(X, Y, Z)
    assert [int(v) for v in vals] == [F.evaluate(P) for P in pts]


# restriction -----------------------------------------------------------------

def test_restrict_conic_to_z0_with_explicit_basis():
    F = form("x^2 + y^2 + z^2", F3)
    L = ProjLine.make(F3, (0, 0, 1))
    g = restrict_to_line(F, L, basis=((1, 0, 0), (0, 1, 0)))
    assert g.coeffs == (1, 0, 1)  # s^2 + t^2


def test_restrict_conic_to_tangent_line():
    F = form("x^2 + y^2 + z^2", F3)
    L = ProjLine.make(F3, (1, 1, 1))
    g = restrict_to_line(F, L)
    assert profile(g) == [(1, 2, 1)]
    [((s, t), m)] = rational_roots(g)
    assert m == 2
    assert L.point_at(s, t) == (1, 1, 1)


def test_restrict_flags_contained_line():
    F = form("x*z + y*z", F5)
    assert restrict_to_line(F, ProjLine.make(F5, (0, 0, 1))).is_zero


def test_canonical_basis_is_first_two_points():
    for coords in [(0, 0, 1), (1, 1, 1), (1, 2, 0), (0, 1, 3)]:
        L = ProjLine.make(F5, coords)
        pts = L.points()
        assert L.basis == (pts[0], pts[1])


@given(st.integers(0, 10 ** 6))
def test_restriction_agrees_with_pointwise_evaluation(seed):
    rng = random.Random(seed)
    ctx = rng.choice([F3, F5, F9])
    F = random_form(ctx, rng.randint(1, 5), rng)
    L = ProjLine.make(ctx, tuple(rng.randrange(ctx.q) for _ in range(3)) or (0, 0, 1))
    assume(any(L.coords))
    g = restrict_to_line(F, L)
    A, B = L.basis
    for s in ctx.elements():
        for t in (0, 1):
            P = tuple(ctx.add(ctx.mul(s, a), ctx.mul(t, b)) for a, b in zip(A, B))
            assert g.evaluate(s, t) == F.evaluate(P)


# profiles --------------------------------------------------------------------

def test_profile_examples():
    g = BinaryForm(F9, 7, (0, 0, 1, 0, 0, 0, 0, 0))  # s^2 t^5
    assert profile(g) == [(1, 2, 1), (1, 5, 1)]
    assert profile(binary(F3, [1, 0, 1])) == [(2, 1, 1)]
    # s t (s - t) = s^2 t - s t^2
    assert profile(binary(F5, [0, -1, 1, 0])) == [(1, 1, 3)]


def test_profile_zero_form():
    with pytest.raises(ZeroForm):
        factor_profile(BinaryForm(F5, 2, (0, 0, 0)))


def test_profile_counts_roots_with_high_multiplicity():
    # (s - t)^3 (s^2 + t^2)^3 over GF(3): multiplicities equal to p
    ctx = F3
    f = [1]
    for factor in [[-1, 1]] * 3 + [[1, 0, 1]] * 3:
        out = [0] * (len(f) + len(factor) - 1)
        for i, a in enumerate(f):
            for j, b in enumerate(factor):
                out[i + j] = (out[i + j] + a * b) % 3
        f = out
    g = binary(ctx, f)
    assert profile(g) == [(1, 3, 1), (2, 3, 1)]


forms_strategy = st.tuples(
    st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2)]),
    st.integers(1, 7),
    st.integers(0, 10 ** 9),
)


@given(forms_strategy)
def test_profile_total_degree(args):
    (p, r), d, seed = args
    ctx = field_create(p, r)
    rng = random.Random(seed)
    g = BinaryForm(ctx, d, tuple(rng.randrange(ctx.q) for _ in range(d + 1)))
    assume(not g.is_zero)
    prof = factor_profile(g)
    assert prof.total_degree == d
    assert list(prof.entries) == sorted(prof.entries)


@given(forms_strategy)
def test_profile_matches_brute_force(args):
    (p, r), d, seed = args
    ctx = field_create(p, r)
    rng = random.Random(seed)
    g = BinaryForm(ctx, d, tuple(rng.randrange(ctx.q) for _ in range(d + 1)))
    assume(not g.is_zero)
    limit = 4
    expected, rest = brute_profile(g, max_e=limit)
    got = profile(g)
    assert [e for e in got if e[0] <= limit] == expected
    assert sum(e * m * c for e, m, c in got if e > limit) == rest


@given(forms_strategy)
def test_squarefree_iff_resultant_with_derivative(args):
    (p, r), d, seed = args
    ctx = field_create(p, r)
    rng = random.Random(seed)
    coeffs = [rng.randrange(ctx.q) for _ in range(d)] + [1 + rng.randrange(ctx.q - 1)]
    g = BinaryForm(ctx, d, tuple(coeffs))  # [1:0] is not a root
    squarefree = all(m == 1 for _, m, _ in factor_profile(g).entries)
    gs = b_partial_s(g)
    if not gs.is_zero:
        assert squarefree == bool(resultant(g, gs))
    else:
        # then g_t vanishes too and g is a p-th power
        assert b_partial_t(g).is_zero
        assert all(m % p == 0 for _, m, _ in factor_profile(g).entries)


@given(st.sampled_from([(3, 1), (5, 1), (3, 2)]), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_pth_power_profile(pr, k, seed):
    p, r = pr
    ctx = field_create(p, r)
    rng = random.Random(seed)
    h = BinaryForm(ctx, k, tuple(rng.randrange(ctx.q) for _ in range(k + 1)))
    assume(not h.is_zero)
    # h^p has coefficients h_i^p at s^(ip) t^((k-i)p)
    coeffs = [0] * (k * p + 1)
    for i, c in enumerate(h.coeffs):
        coeffs[i * p] = ctx.pow(c, p)
    g = BinaryForm(ctx, k * p, tuple(coeffs))
    assert b_partial_s(g).is_zero and b_partial_t(g).is_zero
    want = sorted((e, m * p, c) for e, m, c in factor_profile(h).entries)
    assert profile(g) == want


# resultants ------------------------------------------------------------------

def test_resultant_of_linear_forms():
    for a in range(5):
        for b in range(5):
            f = binary(F5, [-a, 1])
            g = binary(F5, [-b, 1])
            assert resultant(f, g).value == (a - b) % 5


def test_resultant_of_conic_and_derivative():
    f = binary(F3, [1, 0, 1])
    fs = BinaryForm(F3, 1, (0, 2))
    assert resultant(f, fs).value != 0


@given(st.integers(0, 10 ** 6))
def test_resultant_vanishes_iff_common_root(seed):
    rng = random.Random(seed)
    ctx = rng.choice([F3, F5])
    f = BinaryForm(ctx, 2, tuple(rng.randrange(ctx.q) for _ in range(3)))
    g = BinaryForm(ctx, 3, tuple(rng.randrange(ctx.q) for _ in range(4)))
    assume(not f.is_zero and not g.is_zero)
    assume(f.coeffs[-1] or g.coeffs[-1])
    E = extension(ctx, 6)  # splits every form of degree <= 3
    tab = embedding_table(ctx, E)
    fE = BinaryForm(E, 2, tuple(tab[c] for c in f.coeffs))
    gE = BinaryForm(E, 3, tuple(tab[c] for c in g.coeffs))
    pts = [(s, 1) for s in E.elements()] + [(1, 0)]
    common = any(fE.evaluate(*P) == 0 and gE.evaluate(*P) == 0 for P in pts)
    assert common == (resultant(f, g).value == 0)


def test_eliminate_degree_contract():
    rng = random.Random(5)
    F = form("x^3 + y^3 + z^3 + x*y*z", F7)
    G = random_form(F7, 9, rng) + form("z^9", F7)
    R = resultant_eliminate(F, G, 2)
    assert R.degree == 27


def test_eliminate_degenerate():
    with pytest.raises(DegenerateLeadingCoefficient):
        resultant_eliminate(form("x*y", F5), form("x^2 + y*z", F5), 2)


@given(st.integers(0, 10 ** 6))
def test_eliminate_matches_specialization(seed):
    rng = random.Random(seed)
    ctx = rng.choice([F5, F7])
    F = random_form(ctx, 2, rng)
    G = random_form(ctx, 3, rng)
    assume(F.coefficient((0, 0, 2)) and G.coefficient((0, 0, 3)))
    R = resultant_eliminate(F, G, 2)
    a, b = rng.randrange(ctx.q), rng.randrange(ctx.q)
    # restrict to the pencil of points [a:b:z] and compare with a Sylvester resultant in z
    fcoef = [0] * 3
    gcoef = [0] * 4
    for (i, j, k), v in F.terms.items():
        fcoef[k] = ctx.add(fcoef[k], ctx.mul(v, ctx.mul(ctx.pow(a, i), ctx.pow(b, j))))
    for (i, j, k), v in G.terms.items():
        gcoef[k] = ctx.add(gcoef[k], ctx.mul(v, ctx.mul(ctx.pow(a, i), ctx.pow(b, j))))
    # coefficient of z^k sits at index k; as binary forms in (z, w) with w = 1
    want = resultant(BinaryForm(ctx, 2, tuple(fcoef)), BinaryForm(ctx, 3, tuple(gcoef)))
    # R is a form in (x, y): coefficient of x^i y^(D-i) at index i
    assert R.evaluate(a, b) == want.value


# divisibility ----------------------------------------------------------------

def test_divides_examples():
    F = form("x^4 + y^4 + z^4", F9)
    assert divides(F, F ** 3)
    assert divides(F, frobenius_form(F))
    assert frobenius_form(F) == F ** 3 * 4
    C = form("x^2 + y^2 + z^2", F3)
    G = form("x^4 + y^4 + z^4", F3)
    assert not divides(C, G)
    # witness [1:i:0] over GF(9)
    i = F9.from_digits([0, 1])
    assert C.evaluate((1, i, 0), F9) == 0
    assert G.evaluate((1, i, 0), F9) != 0


def test_divides_zero_cases():
    F = form("x + y", F5)
    assert divides(F, TernaryForm(F5, 3))
    with pytest.raises(ZeroForm):
        divides(TernaryForm(F5, 1), F)
    assert not divides(form("x^2 + y*z", F5), F)


@given(st.integers(0, 10 ** 6), st.booleans())
def test_divides_agrees_with_evaluation_oracle(seed, multiple):
    rng = random.Random(seed)
    ctx = rng.choice([F3, F5])
    d = rng.randint(2, 3)
    while True:
        C = PlaneCurve(random_form(ctx, d, rng))
        if not C.F.is_zero and C.is_smooth():
            break
    H = random_form(ctx, rng.randint(0, 2), rng)
    G = C.F * H
    if not multiple:
        G = G + random_form(ctx, G.degree, rng)
    assume(not G.is_zero)
    answer = divides(C.F, G)
    # V(F) is irreducible; enough common zeros force F | G by Bezout
    for e in (2, 3):
        E = extension(ctx, e)
        pts = brute_points(C.F, E)
        if len(pts) > C.d * G.degree:
            break
    vanish = all(G.evaluate(P, E) == 0 for P in pts)
    assert len(pts) > C.d * G.degree
    assert answer == vanish
    if multiple:
        assert answer


# Hessians --------------------------------------------------------------------

def test_hessian_examples():
    assert hessian(form("x^3 + y^3 + z^3", F5)) == form("x*y*z", F5)
    H = hessian(form("x^2 + y^2 + z^2", F3))
    assert H.degree == 0 and H.coefficient((0, 0, 0)) == 2
    assert hessian(form("x^3 + y^3 + z^3", F3)).is_zero


def _det(M, ctx):
    a, b, c = M[0]
    d, e, f = M[1]
    g, h, i = M[2]
    add, sub, mul = ctx.add, ctx.sub, ctx.mul
    return add(sub(mul(a, sub(mul(e, i), mul(f, h))), mul(b, sub(mul(d, i), mul(f, g)))),
               mul(c, sub(mul(d, h), mul(e, g))))


@given(st.integers(0, 10 ** 6))
def test_hessian_covariance(seed):
    rng = random.Random(seed)
    ctx = rng.choice([F5, F7, F9])
    F = random_form(ctx, rng.randint(2, 4), rng)
    M = [tuple(rng.randrange(ctx.q) for _ in range(3)) for _ in range(3)]
    det = _det(M, ctx)
    assume(det)
    # compose takes rows giving the substitutions for x, y, z
    lhs = hessian(F.compose(M))
    rhs = hessian(F).compose(M).scale(ctx.mul(det, det))
    assert lhs == rhs


def test_bordered_hessian_detects_fermat_flexes():
    F = form("x^3 + y^3 + z^3", F7)
    B = bordered_hessian(F)
    # flexes of the Fermat cubic lie on xyz = 0
    for P in [(1, 6, 0), (0, 1, 6), (1, 0, 6)]:
        assert F.evaluate(P) == 0 and B.evaluate(P) == 0
    assert B.evaluate((1, 2, 0)) != 0 or F.evaluate((1, 2, 0)) != 0
