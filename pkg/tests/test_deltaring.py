from fractions import Fraction

import pytest

from cdgkit.bec import BecHomComplex, bec_contracting, phi, psi_minus, psi_plus
from cdgkit.cdg import HomComplex, HomElement
from cdgkit.constructions import shift
from cdgkit.deltaring import (
    build_delta_ring,
    check_acyclic,
    delta_ring_violations,
    from_delta_module,
    g_minus,
    g_minus_vs_g_plus_shift,
    g_plus,
    to_delta_module,
    upsilon,
    upsilon_inverse,
    upsilon_roundtrip_report,
    z0_hom_dim_delta,
)
from cdgkit.graded import ext_graded, hom_dim, validate_algebra, validate_module
from cdgkit.linalg import Matrix, PrimeField, Rationals
from cdgkit.registry import (
    complex_cdg,
    free_rank_one,
    make_ring_dual,
    make_ring_k,
    make_ring_mf2,
    mf_rank11,
    simple_cdg,
    simple_module,
)

from oracles import enumerate_ext1_f2

QQ = Rationals()
F2 = PrimeField(2)
K = make_ring_k(QQ)
DUAL = make_ring_dual(QQ)
MF2 = make_ring_mf2(F2)

DK = build_delta_ring(K)
DD = build_delta_ring(DUAL)
DM = build_delta_ring(MF2)


def two_term(ring, val, lo=0, name="X"):
    f = ring.field
    return complex_cdg(ring, {lo: 1, lo + 1: 1}, {lo: Matrix(f, [[val]], 1)}, name=name)


def test_delta_ring_dimensions():
    assert DK.algebra.space.total == 2 * K.algebra.space.total
    assert DD.algebra.space.total == 2 * DUAL.algebra.space.total
    assert DM.algebra.space.total == 2 * MF2.algebra.space.total


def test_delta_ring_over_field_is_exterior_algebra():
    # relations collapse: delta^2 = h = 0 and delta commutes with scalars
    dd = DK.algebra.multiply(DK.delta, DK.delta)
    assert all(x == QQ.zero for x in dd)
    assert validate_algebra(DK.algebra) == []


def test_delta_squared_is_curvature_on_mf2():
    dd = DM.algebra.multiply(DM.delta, DM.delta)
    assert dd == DM.embed_element(MF2.h)
    # validator re-checks every relation on all basis pairs
    assert delta_ring_violations(DM) == []


def test_rhat_acyclic_for_all_registry_rings():
    for dr in (DK, DD, DM, build_delta_ring(make_ring_mf2(PrimeField(5)))):
        ok, dims = check_acyclic(dr)
        assert ok
        assert all(v == 0 for v in dims.values())


def test_module_round_trip_identity():
    mods = [
        mf_rank11(MF2),
        simple_cdg(MF2),
        two_term(K, Fraction(1)),
        two_term(K, Fraction(0)),
    ]
    for m in mods:
        dr = DM if m.ring == MF2 else DK
        dm = to_delta_module(dr, m)
        assert validate_module(dm) == []
        back = from_delta_module(dr, dm, name=m.name)
        assert back == m


def test_z0_hom_matches_delta_linear_maps():
    pairs = [
        (mf_rank11(MF2), mf_rank11(MF2)),
        (mf_rank11(MF2), simple_cdg(MF2)),
        (simple_cdg(MF2), mf_rank11(MF2)),
        (two_term(K, Fraction(1)), two_term(K, Fraction(0))),
    ]
    for x, y in pairs:
        dr = DM if x.ring == MF2 else DK
        hc = HomComplex(x, y)
        assert hc.cocycles(0).dim() == z0_hom_dim_delta(dr, x, y)


def test_ext1_delta_matches_enumeration_on_mf2():
    # convert CDG-modules and compare Ext^1 over the delta algebra with
    # the brute-force classification of extensions
    for xc, yc in [
        (simple_cdg(MF2, 0), simple_cdg(MF2, 0)),
        (simple_cdg(MF2, 0), simple_cdg(MF2, 1)),
        (simple_cdg(MF2, 1), simple_cdg(MF2, 0)),
    ]:
        dx, dy = to_delta_module(DM, xc), to_delta_module(DM, yc)
        assert ext_graded(dx, dy, 1) == enumerate_ext1_f2(dx, dy)


def test_g_plus_dimension_and_validity():
    free = free_rank_one(DUAL.algebra, 0, "g")
    gp = g_plus(DD, free)
    assert gp.module.total_dim() == 2 * free.space.total
    assert validate_module(gp.module.module) == []
    s = simple_module(MF2.algebra)
    gp2 = g_plus(DM, s)
    assert gp2.module.total_dim() == 2
    assert validate_module(gp2.module.module) == []


def test_g_plus_adjunction_dims():
    # Hom_{Z0}(G+ M, N) = Hom_graded(M, N#)
    pairs = [
        (simple_module(MF2.algebra), mf_rank11(MF2)),
        (free_rank_one(MF2.algebra, 0, "f"), mf_rank11(MF2)),
        (simple_module(MF2.algebra, 1, "s1"), simple_cdg(MF2)),
    ]
    for gm, n_mod in pairs:
        gp = g_plus(DM, gm)
        hc = HomComplex(gp.module, n_mod)
        assert hc.cocycles(0).dim() == hom_dim(gm, n_mod.module, 0)


def test_g_minus_adjunction_dims():
    # Hom_{Z0}(N, G- M) = Hom_graded(N#, M)
    pairs = [
        (simple_module(MF2.algebra), mf_rank11(MF2)),
        (free_rank_one(MF2.algebra, 1, "f"), simple_cdg(MF2)),
    ]
    for gm, n_mod in pairs:
        gmn = g_minus(DM, gm)
        assert validate_module(gmn.module.module) == []
        hc = HomComplex(n_mod, gmn.module)
        assert hc.cocycles(0).dim() == hom_dim(n_mod.module, gm, 0)


def test_g_minus_is_shifted_g_plus():
    for dr, gm in [
        (DM, simple_module(MF2.algebra)),
        (DM, free_rank_one(MF2.algebra, 0, "f")),
        (DD, free_rank_one(DUAL.algebra, 1, "g")),
        (DK, free_rank_one(K.algebra, 0, "t")),
    ]:
        iso, target = g_minus_vs_g_plus_shift(dr, gm)  # raises on failure
        assert iso.gmap.is_surjective()


def test_g_plus_of_module_is_contractible():
    gp = g_plus(DM, free_rank_one(MF2.algebra, 0, "f"))
    xb = upsilon(DM, free_rank_one(MF2.algebra, 0, "f"))
    from cdgkit.cdg import contracting_homotopy

    assert contracting_homotopy(gp.module) is not None
    # sigma itself is the witness for the underlying of upsilon
    assert xb.sigma.differential().gmap.is_zero() is False


def test_upsilon_gives_valid_bec_object():
    for dr, gm in [
        (DM, simple_module(MF2.algebra)),
        (DM, free_rank_one(MF2.algebra, 1, "f")),
        (DK, free_rank_one(K.algebra, 0, "t")),
    ]:
        xb = upsilon(dr, gm)  # BecModule constructor validates the axioms
        assert xb.base.total_dim() == 2 * gm.space.total


def test_upsilon_inverse_on_the_nose():
    for dr, gm in [
        (DM, simple_module(MF2.algebra)),
        (DM, free_rank_one(MF2.algebra, 0, "f")),
    ]:
        xb = upsilon(dr, gm)
        back, incl = upsilon_inverse(dr, xb)
        assert back == gm


def test_upsilon_roundtrip_on_phi_objects():
    for dr, m in [
        (DM, mf_rank11(MF2)),
        (DM, simple_cdg(MF2)),
        (DK, two_term(K, Fraction(1))),
    ]:
        xb = phi(m)
        assert upsilon_roundtrip_report(dr, xb) == []


def test_upsilon_roundtrip_on_upsilon_objects():
    for dr, gm in [
        (DM, simple_module(MF2.algebra)),
        (DK, free_rank_one(K.algebra, 2, "t")),
    ]:
        xb = upsilon(dr, gm)
        assert upsilon_roundtrip_report(dr, xb) == []


def test_psi_upsilon_equals_g_pm():
    gm = simple_module(MF2.algebra)
    xb = upsilon(DM, gm)
    gp = g_plus(DM, gm)
    assert psi_plus(xb) == gp.module
    # psi_minus(Y M) = G+(M)[1] and G-(M) is isomorphic to it
    iso, target = g_minus_vs_g_plus_shift(DM, gm)
    assert psi_minus(xb) == target


def test_phi_equals_upsilon_of_underlying_dims():
    for dr, m in [(DM, mf_rank11(MF2)), (DK, two_term(K, Fraction(0)))]:
        pa = phi(m)
        ya = upsilon(dr, m.module)
        assert pa.base.dims() == ya.base.dims()


def test_all_bec_objects_over_k_contractible_via_upsilon():
    gm = free_rank_one(K.algebra, 0, "t")
    xb = upsilon(DK, gm)
    assert bec_contracting(xb) is not None
