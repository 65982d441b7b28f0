"""Acceptance criteria, one test each; every comparison is exact (zero tolerance).

Run with `pytest tests/test_acceptance.py -v -s` to see one line per criterion.
"""
import random
from fractions import Fraction
from itertools import combinations, product

from corpus import (
    frame_ideal_indices,
    g_lm,
    h_lm,
    mono,
    omega_std,
    paper_algebras,
    psi4,
    random_almost_abelian,
    random_form,
)
from lieshear import (
    ComplexStructure,
    KForm,
    LieAlgebra,
    Metric,
    SearchSpec,
    ShearData,
    Vector,
    apply_shear,
    apply_twist,
    decompose_dalpha,
    ds_form,
    enumerate_f0,
    hodge_star_orthonormal,
    interior,
    is_automorphic,
    is_closed,
    kahler_check,
    parse_salamon,
    print_salamon,
    shear_candidate,
    type_components,
    validate_shear,
    wedge,
)
from test_properties import bracket_jacobi_oracle


def report(n, text):
    print(f"ACCEPTANCE PASS criterion {n}: {text}")


def test_criterion_1_twist_golden_pair():
    h3 = parse_salamon("(0,0,12)")
    flat = apply_twist(h3, mono(3, (3,)), mono(3, (1, 2), -1))
    assert print_salamon(flat) == "(0,0,0)"
    back = apply_twist(parse_salamon("(0,0,0)"), mono(3, (3,)), mono(3, (1, 2)))
    assert print_salamon(back) == "(0,0,12)"
    report(1, "twist golden pair, exact shorthand-string equality")


def test_criterion_2_shear_golden_triple():
    g = parse_salamon("(51,52,53,2.54,0)")
    x, alpha = Vector.basis(5, 4), mono(5, (4,))

    s1 = apply_shear(g, ShearData(X=x, alpha=alpha, F0=mono(5, (1, 3))))
    assert print_salamon(s1) == "(51,52,53,13+2.54,0)"

    s2 = apply_shear(g, ShearData(X=x, alpha=alpha, F0=mono(5, (5, 4), -2)))
    assert print_salamon(s2) == "(51,52,53,0,0)"

    s3 = apply_shear(s2, ShearData(X=x, alpha=alpha, F0=mono(5, (5, 4), 2)))
    assert print_salamon(s3) == "(51,52,53,2.54,0)"

    assert s1.jacobi_check().passed and s2.jacobi_check().passed and s3.jacobi_check().passed
    report(2, "shear golden triple with inverse recovery, all Jacobi-verified")


def test_criterion_3_decomposition_values():
    g = parse_salamon("(51,52,53,2.54,0)")
    res = decompose_dalpha(g, Vector.basis(5, 4), mono(5, (4,)))
    assert res.eta == mono(5, (5,), 2) and res.f.is_zero()
    for lam, mu in [(1, 2), (1, -1), (3, 0)]:
        res = decompose_dalpha(g_lm(lam, mu), Vector.basis(7, 1), mono(7, (1,)))
        assert res.eta == mono(7, (7,), -(lam + mu))
        assert res.f.is_zero()
    report(3, "decomposition values eta = 2e5 and eta = -(lam+mu)e7, F = 0")


def test_criterion_4_kahler_shear():
    ab6 = LieAlgebra.abelian(6)
    f0 = mono(6, (1, 2))
    data = ShearData(X=Vector.basis(6, 1), alpha=mono(6, (1,)), F0=f0, a=Fraction(-1))
    sheared = apply_shear(ab6, data)
    assert print_salamon(sheared) == "(12,0,0,0,0,0)"

    omega = omega_std(6)
    rep = kahler_check(sheared, Metric.standard(6), ComplexStructure.standard(6), omega)
    assert rep.passed, rep.checks

    assert ds_form(ab6, data, omega).is_zero()

    anti, f11 = type_components(ComplexStructure.standard(6), f0)
    assert anti.is_zero() and f11 == f0
    report(4, "Kaehler shear (12,0^5): structure check, d_S omega = 0, F0 of type (1,1)")


def test_criterion_5_g2_shear():
    psi = psi4()
    for lam, mu in [(1, 2), (1, -1)]:
        g = g_lm(lam, mu)
        assert is_closed(g, psi)

        data = ShearData(
            X=Vector.basis(7, 1),
            alpha=mono(7, (1,)),
            F0=mono(7, (2, 3)),
            a=Fraction(-1),
            eta_g=mono(7, (7,), -(lam + mu)),
        )
        sheared = apply_shear(g, data)
        assert sheared == h_lm(lam, mu)

        assert ds_form(g, data, psi).is_zero()
        assert is_closed(sheared, psi)

        for k in range(1, 8):
            ok, _ = is_automorphic(g, data, mono(7, (k,)))
            assert ok, f"e{k} not automorphic for (lam,mu)=({lam},{mu})"

        verdict, _ = sheared.is_almost_abelian()
        assert verdict is False
    report(5, "G2 shear family: closed psi transfers, all generators automorphic, "
              "sheared algebras not almost abelian")


def test_criterion_6_condition_equivalence():
    rng = random.Random(2024)
    bases = list(paper_algebras())
    for dim in (5, 6, 7):
        for _ in range(5):
            cand = random_almost_abelian(rng, dim)
            if cand.jacobi_check().passed and cand.series().is_solvable:
                bases.append(cand)
    a_pool = [Fraction(-1), Fraction(1), Fraction(2), Fraction(-1, 2), Fraction(3)]
    checked = 0
    valid_seen = invalid_seen = 0
    while checked < 220:
        g = bases[checked % len(bases)]
        ideals = frame_ideal_indices(g)
        if not ideals:
            bases.remove(g)
            continue
        k = rng.choice(ideals)
        alpha = mono(g.dim, (k,))
        if rng.random() < 0.3:
            # alpha with a W-component still pairing to 1 with X
            extra = rng.choice([i for i in range(1, g.dim + 1) if i != k])
            alpha = alpha + mono(g.dim, (extra,), rng.choice([Fraction(1), Fraction(-2)]))
        data = ShearData(
            X=Vector.basis(g.dim, k),
            alpha=alpha,
            F0=random_form(rng, g.dim, 2, max_terms=3),
            a=rng.choice(a_pool),
        )
        rep = validate_shear(g, data)
        candidate = shear_candidate(g, data)
        assert rep.valid == candidate.jacobi_check().passed, (
            print_salamon(g) if g.dim <= 9 else g.dim,
            str(data.F0),
            rep.conditions,
        )
        valid_seen += rep.valid
        invalid_seen += not rep.valid
        checked += 1
    assert checked >= 200 and valid_seen > 10 and invalid_seen > 10
    report(6, f"validity conditions match Jacobi on {checked} random shears "
              f"({valid_seen} valid, {invalid_seen} invalid), 100% agreement")


def _random_form(rng, dim, degree, max_terms=3):
    return random_form(rng, dim, degree, max_terms)


def test_criterion_7_exterior_property_suite():
    rng = random.Random(777)
    cases = 500

    for _ in range(cases):  # graded anticommutativity
        n = rng.randint(2, 7)
        ka = rng.randint(0, n)
        a = _random_form(rng, n, ka)
        b = _random_form(rng, n, rng.randint(0, n - ka))
        sign = Fraction((-1) ** (a.degree * b.degree))
        assert wedge(a, b) == sign * wedge(b, a)

    for _ in range(cases):  # associativity
        n = rng.randint(2, 7)
        a = _random_form(rng, n, rng.randint(0, 2))
        b = _random_form(rng, n, rng.randint(0, 2))
        c = _random_form(rng, n, rng.randint(0, 2))
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))

    for _ in range(cases):  # interior antiderivation
        n = rng.randint(2, 7)
        ka = rng.randint(0, n)
        a = _random_form(rng, n, ka)
        b = _random_form(rng, n, rng.randint(0, n - ka))
        v = Vector([Fraction(rng.randint(-3, 3)) for _ in range(n)])
        sign = Fraction((-1) ** a.degree)
        assert interior(v, wedge(a, b)) == wedge(interior(v, a), b) + sign * wedge(a, interior(v, b))

    algebras = paper_algebras()
    for i in range(cases):  # d antiderivation
        g = algebras[i % len(algebras)]
        a = _random_form(rng, g.dim, rng.randint(0, 3))
        b = _random_form(rng, g.dim, rng.randint(0, 3))
        sign = Fraction((-1) ** a.degree)
        assert g.d(wedge(a, b)) == wedge(g.d(a), b) + sign * wedge(a, g.d(b))

    agree = 0
    for _ in range(cases):  # d∘d = 0 iff bracket-Jacobi, cross-implementation
        n = rng.randint(2, 5)
        cand = LieAlgebra([_random_form(rng, n, 2, max_terms=2) for _ in range(n)])
        assert cand.jacobi_check().passed == bracket_jacobi_oracle(cand)
        agree += 1

    for _ in range(cases):  # double-star sign law
        n = rng.randint(1, 7)
        k = rng.randint(0, n)
        f = _random_form(rng, n, k)
        orientation = rng.choice([1, -1])
        twice = hodge_star_orthonormal(hodge_star_orthonormal(f, orientation), orientation)
        assert twice == Fraction((-1) ** (k * (n - k))) * f

    report(7, f"exterior property suite: six laws x {cases} random cases, zero failures")


def test_criterion_8_search_reproduction():
    # single-term deformations of the solvable example
    g = parse_salamon("(51,52,53,2.54,0)")
    spec = SearchSpec(base=g, X=Vector.basis(5, 4), alpha=mono(5, (4,)), max_terms=1)
    hits = enumerate_f0(spec)
    assert mono(5, (1, 3)) in [h.f0 for h in hits]

    # brute-force oracle over the identical candidate space
    oracle = []
    support = spec.effective_support()
    for t in range(2):
        for mons in combinations(support, t):
            for cs in product((Fraction(-1), Fraction(1)), repeat=t):
                f0 = KForm(5, 2, {(1 << (i - 1)) | (1 << (j - 1)): c for (i, j), c in zip(mons, cs)})
                data = ShearData(X=Vector.basis(5, 4), alpha=mono(5, (4,)), F0=f0)
                if shear_candidate(g, data).jacobi_check().passed:
                    oracle.append(f0)
    assert [h.f0 for h in hits] == oracle

    # psi-preserving single-term deformations of the G2 family member
    g12 = g_lm(1, 2)
    psi = psi4()
    spec12 = SearchSpec(base=g12, X=Vector.basis(7, 1), alpha=mono(7, (1,)),
                        max_terms=1, preserve=(psi,))
    hits12 = enumerate_f0(spec12)
    assert mono(7, (2, 3)) in [h.f0 for h in hits12]

    oracle12 = []
    for t in range(2):
        for mons in combinations(spec12.effective_support(), t):
            for cs in product((Fraction(-1), Fraction(1)), repeat=t):
                f0 = KForm(7, 2, {(1 << (i - 1)) | (1 << (j - 1)): c for (i, j), c in zip(mons, cs)})
                data = ShearData(X=Vector.basis(7, 1), alpha=mono(7, (1,)), F0=f0)
                cand = shear_candidate(g12, data)
                if cand.jacobi_check().passed and is_closed(cand, psi):
                    oracle12.append(f0)
    assert [h.f0 for h in hits12] == oracle12
    report(8, "search reproduces e13 and psi-preserving e23; exact match with "
              "brute-force Jacobi oracle")


def test_criterion_9_parser_roundtrip():
    plain = ["(0,0,12)", "(0,0,0)", "(51,52,53,2.54,0)", "(51,52,53,13+2.54,0)",
             "(51,52,53,0,0)", "(12,0,0,0,0,0)"]
    for s in plain:
        g = parse_salamon(s)
        assert parse_salamon(print_salamon(g)) == g
        assert print_salamon(g) == s  # canonical form coincides with the source

    instantiated = {
        "(3.17,27,2.37,-3.47,-57,-2.67,0)": g_lm(1, 2),
        "(0,27,-37,0,-57,67,0)": g_lm(1, -1),
        "(3.17,3.27,0,-3.47,-3.57,0,0)": g_lm(3, 0),
        "(3.17+23,27,2.37,-3.47,-57,-2.67,0)": h_lm(1, 2),
        "(23,27,-37,0,-57,67,0)": h_lm(1, -1),
    }
    for text, expected in instantiated.items():
        g = parse_salamon(text)
        assert g == expected
        assert parse_salamon(print_salamon(g)) == g
    report(9, "parse/print round-trip on all reference strings incl. instantiated families")
