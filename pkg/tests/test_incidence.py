import random
from fractions import Fraction

import pytest

from ffcurves import field_create, load_fixture
from ffcurves.curves import PlaneCurve
from ffcurves.errors import CoincidentPoints, CurveContainsLine, FrobeniusNonClassical
from ffcurves.experiments import random_smooth_curve, sample_seed
from ffcurves.forms import IntersectionProfile, frobenius_form
from ffcurves.incidence import (
    N_READING,
    RATIONAL_TANGENT,
    SPECIAL_TANGENT,
    TRANSVERSE,
    _kind,
    average_rational_per_line,
    classify_line,
    collinear_rational_max,
    find_good_line,
    frobenius_incidence,
    incidence_sum,
    local_multiplicity,
    tangent_census,
)
from ffcurves.io import parse_form
from ffcurves.projective import ProjLine, ProjPoint, all_lines, all_points, line_through, order_key

F3, F5, F7, F9 = (field_create(3), field_create(5), field_create(7), field_create(3, 2))


def curve(text, ctx):
    return PlaneCurve(parse_form(text, ctx))


def line(ctx, coords):
    return ProjLine.make(ctx, coords)


# lines -----------------------------------------------------------------------

def test_all_lines():
    assert len(all_lines(F3)) == 13
    assert len(all_lines(F9)) == 91
    assert all_lines(F3)[0].coords == (1, 0, 0)
    ls = all_lines(F5)
    assert len({L.coords for L in ls}) == 31
    assert [L.coords for L in ls] == sorted((L.coords for L in ls), key=order_key)


def test_points_and_lines_incidence():
    for ctx in (F3, F5, F9):
        q = ctx.q
        pts = all_points(ctx)
        assert len(pts) == q * q + q + 1
        for L in all_lines(ctx)[:10]:
            on = L.points()
            assert len(on) == q + 1
            assert all(L.contains(P) for P in on)


def test_line_through():
    X, Y = ProjPoint.make(F5, (1, 0, 0)), ProjPoint.make(F5, (0, 1, 0))
    assert line_through(X, Y).coords == (0, 0, 1)
    P, Q = ProjPoint.make(F3, (1, 1, 1)), ProjPoint.make(F3, (1, 2, 0))
    L = line_through(P, Q)
    assert L.contains(P.coords) and L.contains(Q.coords)
    assert L.coords == (1, 1, 1)
    with pytest.raises(CoincidentPoints):
        line_through(P, ProjPoint.make(F3, (2, 2, 2)))


# classification --------------------------------------------------------------

def test_classify_conic_lines():
    C = curve("x^2 + y^2 + z^2", F3)
    r = classify_line(C, line(F3, (0, 0, 1)))
    assert r.kind == TRANSVERSE and r.profile.entries == ((2, 1, 1),)
    r = classify_line(C, line(F3, (1, 1, 1)))
    assert r.kind == RATIONAL_TANGENT
    assert r.profile.entries == ((1, 2, 1),)
    assert r.rational_points == (((1, 1, 1), 2),)


def test_kind_mapping():
    assert _kind(IntersectionProfile(((1, 1, 1), (2, 3, 1)))) == SPECIAL_TANGENT
    assert _kind(IntersectionProfile(((1, 2, 1), (2, 1, 1)))) == RATIONAL_TANGENT
    assert _kind(IntersectionProfile(((1, 1, 3), (2, 1, 2)))) == TRANSVERSE


def test_classify_contained_line():
    with pytest.raises(CurveContainsLine):
        classify_line(curve("x*y + x*z", F5), line(F5, (1, 0, 0)))


def test_find_good_line_examples():
    assert find_good_line(curve("x^2 + y^2 + z^2", F3)).coords == (1, 0, 0)
    L = find_good_line(load_fixture("hermitian-9"))
    assert L is not None
    assert classify_line(load_fixture("hermitian-9"), L).rational_count == 4
    for name in ("plane-filling-3", "plane-filling-5"):
        assert find_good_line(load_fixture(name)) is None


def test_find_good_line_is_first_transverse():
    C = curve("x^3 + y^3 + z^3", F7)
    census = tangent_census(C)
    assert find_good_line(C).coords == census.good_line.coords
    first = next(r for r in census.records if r.kind == TRANSVERSE)
    assert first.line.coords == census.good_line.coords


# censuses --------------------------------------------------------------------

@pytest.mark.parametrize("name,counts", [
    ("conic-3", (9, 4, 0)),
    ("hermitian-9", (63, 28, 0)),
    ("fermat3-7", (48, 9, 0)),
    ("plane-filling-3", (0, 13, 0)),
])
def test_census_counts(name, counts):
    census = tangent_census(load_fixture(name))
    assert census.counts() == counts
    assert census.lines_total == sum(counts)


def test_conic_census_by_hand():
    # 6 two-point secants + 3 conjugate-pair secants are transverse; 4 tangents
    C = curve("x^2 + y^2 + z^2", F3)
    census = tangent_census(C)
    trans = census.of_kind(TRANSVERSE)
    assert sum(1 for r in trans if r.rational_count == 2) == 6
    assert sum(1 for r in trans if r.rational_count == 0) == 3
    assert census.histograms[TRANSVERSE] == {"{(1,1,x2)}": 6, "{(2,1,x1)}": 3}


@pytest.mark.parametrize("name", ["conic-3", "fermat3-7", "hermitian-9", "pardini-9", "pardini7-9"])
def test_rational_tangents_bounded_by_points(name):
    C = load_fixture(name)
    assert tangent_census(C).R <= C.count_points(1)


def test_collinear_max():
    assert collinear_rational_max(load_fixture("hermitian-9"))[0] == 4
    n, L = collinear_rational_max(curve("x^2 + y^2 + z^2", F3))
    assert n == 2
    assert classify_line(curve("x^2 + y^2 + z^2", F3), L).rational_count == 2
    n, L = collinear_rational_max(curve("x + 2*y", F5))
    assert n == 6 and L.coords == (1, 2, 0)


def test_averages():
    a = average_rational_per_line(load_fixture("hermitian-9"))
    assert a.average == Fraction(280, 91)
    assert a.lower == Fraction(12, 5)
    assert a.matches_hv and a.exceeds_lower
    b = average_rational_per_line(curve("x^2 + y^2 + z^2", F3))
    assert b.average == Fraction(16, 13)
    assert b.hv_value is None


def _random_smooth(n, seed):
    fields = [F3, F5, F7, F9]
    return [random_smooth_curve(fields[i % 4], 2 + i % 5, "any", sample_seed(seed, i)) for i in range(n)]


@pytest.mark.parametrize("C", _random_smooth(12, 31), ids=lambda C: C.F.to_text()[:30])
def test_census_invariants_random(C):
    census = tangent_census(C)
    q = C.q
    assert census.lines_total == q * q + q + 1
    assert incidence_sum(C, census) == C.count_points(1) * (q + 1)
    for r in census.records:
        assert r.profile.total_degree == C.d
        assert r.kind == _kind(r.profile)
        if r.kind == SPECIAL_TANGENT:
            assert any(e >= 2 and m >= 2 for e, m, _ in r.profile.entries)
        # rational points read off the profile
        assert sum(c for e, _, c in r.profile.entries if e == 1) == r.rational_count
        for P, m in r.rational_points:
            assert C.contains(ProjPoint.make(C.ctx, P))
            assert r.line.contains(P)


@pytest.mark.parametrize("seed", range(6))
def test_non_reflexive_tangency_is_at_least_3(seed):
    C = random_smooth_curve(F9, None, ("pardini", 1 + seed % 2), sample_seed(41, seed))
    for r in tangent_census(C).records:
        for e, m, c in r.profile.entries:
            assert m == 1 or m >= 3


def test_fnc_transverse_lines_are_all_rational():
    for name in ("hermitian-9", "hermitian-25", "hermitian-27"):
        census = tangent_census(load_fixture(name))
        for r in census.of_kind(TRANSVERSE):
            assert all(e == 1 for e, _, _ in r.profile.entries)


# Frobenius incidence ---------------------------------------------------------

def test_frobenius_incidence_conic():
    prof = frobenius_incidence(curve("x^2 + y^2 + z^2", F3))
    assert prof.total_degree == 8 == prof.expected_degree
    assert prof.entries == ((1, 2, 4),)
    assert prof.N == 0
    assert [m for _, m in prof.rational_points] == [2, 2, 2, 2]


def test_frobenius_incidence_fermat_cubic():
    C = load_fixture("fermat3-7")
    prof = frobenius_incidence(C)
    assert prof.total_degree == 27
    assert prof.rational_count == 9 and prof.rational_mult_ok
    rational_weight = sum(m for _, m in prof.rational_points)
    assert prof.total_degree - rational_weight == sum(e * m * c for e, m, c in prof.entries if e > 1)


def test_frobenius_incidence_rejects_fnc():
    with pytest.raises(FrobeniusNonClassical):
        frobenius_incidence(load_fixture("hermitian-9"))


def _support_by_degree(C, e_max):
    G = frobenius_form(C.F)
    counts = {}
    for e in range(1, e_max + 1):
        for P in C.points_over(e):
            if P.residue_degree == e and G.evaluate(P.coords, P.ctx) == 0:
                counts[e] = counts.get(e, 0) + 1
    return counts


def _oracle_curves():
    out = []
    rng = random.Random(2024)
    for i in range(14):
        ctx = [F3, F5, F7][i % 3]
        d = 2 + rng.randrange(3)
        C = random_smooth_curve(ctx, d, "any", sample_seed(77, i))
        if not C.is_frobenius_nonclassical():
            out.append(C)
    return out


@pytest.mark.parametrize("C", _oracle_curves(), ids=lambda C: f"{C.q}:{C.F.to_text()[:24]}")
def test_frobenius_incidence_support_matches_enumeration(C):
    prof = frobenius_incidence(C)
    assert prof.total_degree == prof.expected_degree
    assert prof.rational_mult_ok
    e_max = 1
    while (C.q ** (e_max + 1)) ** 2 <= 1 << 20:
        e_max += 1
    seen = _support_by_degree(C, e_max)
    want = {}
    for e, m, c in prof.entries:
        if e <= e_max:
            want[e] = want.get(e, 0) + e * c
    assert seen == want
    assert {P for P, _ in prof.rational_points} == {P.coords for P in C.rational_points()}


def test_local_multiplicity_at_conic_points():
    C = curve("x^2 + y^2 + z^2", F3)
    G = frobenius_form(C.F)
    for P in C.rational_points():
        assert local_multiplicity(C.F, G, P.coords, F3) == 2


def test_n_reading_is_documented():
    assert "non-rational" in N_READING
