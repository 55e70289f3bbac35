import random
from fractions import Fraction

import pytest

from itroots.certifier import (ALEPH0, CONTINUUM, Abstention, Cardinal,
                               FiberProfile, MalformedProfile,
                               NonRootCertificate, REASON_INEQUALITY,
                               REASON_NO_NON_FIXED, certify_finite,
                               certify_profiled, finite_profile,
                               _scan_candidates)
from itroots.endo import Endofunction
from itroots.root_solver import RootQuery, find_root
from test_endo import CONSTANT9, F19, _truncated_double_ray
from test_root_solver import SIX_POINT_NO_ROOT


# ---------------------------------------------------------------- cardinals

def test_cardinal_total_order():
    vals = [Cardinal.finite(0), Cardinal.finite(1), Cardinal.finite(7),
            ALEPH0, CONTINUUM]
    for i, a in enumerate(vals):
        for j, b in enumerate(vals):
            assert (a < b) == (i < j)
            assert (a <= b) == (i <= j)
            assert (a == b) == (i == j)


def test_cardinal_finite_products():
    assert Cardinal.finite(3).mul(Cardinal.finite(4)) == Cardinal.finite(12)
    assert Cardinal.finite(2).mul(Cardinal.finite(0)) == Cardinal.finite(0)


def test_cardinal_aleph0_absorbs_finite_products():
    assert ALEPH0.mul(Cardinal.finite(5)) == ALEPH0
    assert Cardinal.finite(5).mul(ALEPH0) == ALEPH0
    assert ALEPH0.mul(Cardinal.finite(0)) == Cardinal.finite(0)


def test_cardinal_continuum_absorbs_countable_unions():
    assert CONTINUUM.add(ALEPH0) == CONTINUUM
    assert CONTINUUM.add(Cardinal.finite(10)) == CONTINUUM
    assert ALEPH0.add(ALEPH0) == ALEPH0
    assert Cardinal.finite(2).add(Cardinal.finite(3)) == Cardinal.finite(5)


def test_cardinal_validation_and_json():
    with pytest.raises(ValueError):
        Cardinal.finite(-1)
    with pytest.raises(ValueError):
        Cardinal(1, 3)
    for c in (Cardinal.finite(9), ALEPH0, CONTINUUM):
        assert Cardinal.from_json(c.to_json()) == c


# ----------------------------------------------------------- finite certify

def test_certify_six_point_map():
    cert = certify_finite(SIX_POINT_NO_ROOT)
    assert isinstance(cert, NonRootCertificate)
    assert cert.case == "C1"
    assert cert.x0 == 0
    assert cert.evidence.max_other_fiber == Cardinal.finite(1)
    assert cert.evidence.fiber2 == Cardinal.finite(3)


def test_certify_six_point_confirmed_by_oracle():
    for order in (2, 3, 4):
        assert find_root(RootQuery(SIX_POINT_NO_ROOT, order)).status == "none"


def test_certify_abstains_on_constant_map():
    out = certify_finite(CONSTANT9)
    assert isinstance(out, Abstention)
    # the only point with large fibers is fixed; every non-fixed candidate
    # has empty f^-2, so the strict inequality fails
    assert out.reason == REASON_INEQUALITY


def test_certify_abstains_on_f19():
    out = certify_finite(F19)
    assert isinstance(out, Abstention)
    assert out.reason == REASON_INEQUALITY
    prof = finite_profile(F19, 16)
    assert prof.max_other_fiber == Cardinal.finite(9)
    assert prof.fiber2 == Cardinal.finite(9)  # 9 <= 9**3


def test_certify_abstains_on_truncated_double_ray():
    f = _truncated_double_ray()
    out = certify_finite(f)
    assert isinstance(out, Abstention)
    assert out.reason == REASON_INEQUALITY
    prof = finite_profile(f, 12)
    assert prof.fiber2 == Cardinal.finite(8)          # exactly N^3
    assert prof.max_other_fiber == Cardinal.finite(2)


def test_certify_abstains_on_identity():
    out = certify_finite(Endofunction.identity(4))
    assert isinstance(out, Abstention)
    assert out.reason == REASON_NO_NON_FIXED


# --------------------------------------------------------- profile certify

def profile(point, f2, other, not_fixed=True, f1=Cardinal.finite(1)):
    return FiberProfile(point, f1, f2, other, not_fixed)


def test_profiled_c3_for_interval_map_profiles():
    # cardinal data of the two bundled interval maps at their flat values
    p1 = profile(Fraction(3, 4), CONTINUUM, Cardinal.finite(3))
    out = certify_profiled([p1])
    assert isinstance(out, NonRootCertificate)
    assert out.case == "C3" and out.x0 == Fraction(3, 4)

    p2 = profile(Fraction(1, 4), CONTINUUM, Cardinal.finite(3))
    out = certify_profiled([p2])
    assert out.case == "C3" and out.x0 == Fraction(1, 4)


def test_profiled_fixed_point_never_certifies():
    p = profile("x", CONTINUUM, Cardinal.finite(1), not_fixed=False)
    out = certify_profiled([p])
    assert isinstance(out, Abstention)
    assert out.reason == REASON_NO_NON_FIXED


def test_profiled_case_priority():
    # C3 and C2 both apply; C3 must win
    p = profile("x", CONTINUUM, Cardinal.finite(2))
    assert certify_profiled([p]).case == "C3"
    # infinite fiber2 with finite others but not uncountable: C2
    p = profile("x", ALEPH0, Cardinal.finite(2))
    assert certify_profiled([p]).case == "C2"
    # C3 via countably-infinite other fibers: C2 impossible there
    p = profile("x", CONTINUUM, ALEPH0)
    assert certify_profiled([p]).case == "C3"
    # finite data: C1
    p = profile("x", Cardinal.finite(9), Cardinal.finite(2))
    assert certify_profiled([p]).case == "C1"


def test_profiled_first_match_wins():
    a = profile("a", Cardinal.finite(1), Cardinal.finite(2))  # fails
    b = profile("b", CONTINUUM, Cardinal.finite(2))
    c = profile("c", CONTINUUM, Cardinal.finite(2))
    assert certify_profiled([a, b, c]).x0 == "b"


def test_profiled_abstention_reasons():
    assert certify_profiled([]).reason == "no-candidates"
    too_big = profile("x", CONTINUUM, CONTINUUM)
    out = certify_profiled([too_big])
    assert out.reason == "fibers-too-large"
    small = profile("y", Cardinal.finite(2), Cardinal.finite(2))
    out = certify_profiled([small, too_big])
    assert set(out.reason.split("/")) == {"inequality-fails", "fibers-too-large"}


def test_profiled_rejects_malformed():
    with pytest.raises(MalformedProfile):
        certify_profiled([{"point": 1}])


def test_certificate_invariants_enforced():
    with pytest.raises(ValueError):
        NonRootCertificate("x", "C1",
                           profile("x", Cardinal.finite(8), Cardinal.finite(2)))
    with pytest.raises(ValueError):
        NonRootCertificate("x", "C3", profile("x", ALEPH0, Cardinal.finite(1)))
    with pytest.raises(ValueError):
        NonRootCertificate("x", "C2",
                           profile("x", CONTINUUM, Cardinal.finite(1),
                                   not_fixed=False))


# ------------------------------------------------------------ soundness fuzz

def random_endofunction(rng, max_n=7):
    n = rng.randrange(1, max_n + 1)
    return Endofunction(tuple(rng.randrange(n) for _ in range(n)))


def test_soundness_small_fuzz():
    # the full 10k-sample run lives in the acceptance suite; a certificate
    # covers every order at once, so spot-check n = 4 as well on small maps
    rng = random.Random(42)
    certified = 0
    for _ in range(1500):
        f = random_endofunction(rng)
        out = certify_finite(f)
        if isinstance(out, NonRootCertificate):
            certified += 1
            orders = (2, 3, 4) if f.size <= 5 else (2, 3)
            for order in orders:
                assert find_root(RootQuery(f, order)).status == "none", f.table
    assert certified > 0


def test_negative_control_fiber1_variant_is_unsound():
    # dropping the second-order fiber check must certify some map with a root
    rng = random.Random(42)
    for _ in range(3000):
        f = random_endofunction(rng)
        prof, _ = _scan_candidates(f, enforce_fiber2=False)
        if prof is not None:
            if find_root(RootQuery(f, 2)).status == "found":
                return
    pytest.fail("fiber1-only variant never contradicted the oracle")


def test_scope_string():
    cert = certify_finite(SIX_POINT_NO_ROOT)
    assert cert.scope == "no roots of any order n >= 2"
    doc = cert.to_json()
    assert doc["case"] == "C1" and doc["evidence"]["not_fixed"] is True
