import cmath
import math
import random
from itertools import combinations

import pytest

from formaldual.duality import (
    DualityCertificate,
    Route,
    SizeMismatchError,
    Verdict,
    forced_dual_profile,
    is_primitive_pair,
    verify_pair_exact,
    verify_pair_fast,
)
from formaldual.numtheory import divisors
from formaldual.sets import ClassProfile, Subset, class_profile, weight_enumerator


def numeric_dual(n, S, T):
    """Independent check in floating point; the margin is far above rounding error at these n."""
    nuS = weight_enumerator(S).counts
    nuT = weight_enumerator(T).counts
    for y in range(n):
        lhs = len(S) ** 2 / len(T) * nuT[y]
        rhs = sum(nuS[v] * cmath.exp(2j * math.pi * v * y / n) for v in range(n))
        if abs(lhs - rhs) > 1e-6:
            return False
    return True


def pairs(n):
    for a in divisors(n):
        for S in combinations(range(n), a):
            for T in combinations(range(n), n // a):
                yield Subset.of(n, S), Subset.of(n, T)


def test_examples():
    z4_pair = Subset.of(4, [0, 1])
    for verify in (verify_pair_exact, verify_pair_fast):
        c = verify(z4_pair, z4_pair)
        assert c.verdict == Verdict.VALID and c.valid
        assert list(c.nu_S) == [2, 1, 0, 1]
        assert verify(Subset.of(1, [0]), Subset.of(1, [0])).valid
        bad = verify(z4_pair, Subset.of(4, [0, 2]))
        assert bad.verdict == Verdict.INVALID
        assert bad.violation.y == 1
        assert verify(Subset.of(2, [0, 1]), Subset.of(2, [0])).valid
    assert verify_pair_exact(z4_pair, z4_pair).route == Route.EXACT_CYCLOTOMIC
    assert verify_pair_fast(z4_pair, z4_pair).route == Route.RAMANUJAN_CLASS_SUMS


def test_exact_invalid_witness_values():
    c = verify_pair_exact(Subset.of(4, [0, 1]), Subset.of(4, [0, 2]))
    assert (c.violation.lhs, c.violation.rhs) == ("0", "2")


def test_fast_reports_class_break():
    S = Subset.of(16, [0, 1, 3, 10])
    for T in ([0, 1, 2, 3], [0, 4, 8, 12], [0, 1, 3, 10]):
        c = verify_pair_fast(S, Subset.of(16, T))
        assert not c.valid
        assert c.violation.kind == "not_class_constant"
        assert c.violation.detail["side"] == "S"
        assert {c.violation.detail["nu_y1"], c.violation.detail["nu_y2"]} == {1, 2}


def test_size_mismatch():
    with pytest.raises(SizeMismatchError):
        verify_pair_exact(Subset.of(6, [0, 1]), Subset.of(6, [0, 1]))
    with pytest.raises(SizeMismatchError):
        verify_pair_fast(Subset.of(6, [0, 1]), Subset.of(6, [0, 1]))
    with pytest.raises(ValueError):
        verify_pair_exact(Subset.of(4, [0, 1]), Subset.of(6, [0, 1, 2]))


@pytest.mark.parametrize("n", [2, 4, 6, 8, 9])
def test_route_agreement_exhaustive(n):
    for S, T in pairs(n):
        e, f = verify_pair_exact(S, T), verify_pair_fast(S, T)
        assert e.verdict == f.verdict
        if e.valid:
            assert isinstance(class_profile(S), ClassProfile)
            assert isinstance(class_profile(T), ClassProfile)
            forced = forced_dual_profile(S, len(T))
            assert forced.feasible and forced.profile == class_profile(T)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8])
def test_exact_matches_numeric(n):
    for S, T in pairs(n):
        assert verify_pair_exact(S, T).valid == numeric_dual(n, S, T)


def test_numeric_spot_checks_larger():
    rng = random.Random(11)
    for n in (12, 16, 18):
        for _ in range(150):
            a = rng.choice([d for d in divisors(n) if 1 < d < n])
            S = Subset.of(n, rng.sample(range(n), a))
            T = Subset.of(n, rng.sample(range(n), n // a))
            assert verify_pair_exact(S, T).valid == numeric_dual(n, S, T)
    # subgroup / dual subgroup pairs are always valid
    for n in (12, 16, 18, 20):
        for m in divisors(n):
            S = Subset.of(n, range(0, n, m))
            T = Subset.of(n, range(0, n, n // m))
            assert verify_pair_exact(S, T).valid and verify_pair_fast(S, T).valid


def test_translation_invariance():
    for S, T in pairs(4):
        v = verify_pair_exact(S, T).verdict
        for c in range(4):
            for c2 in range(4):
                assert verify_pair_exact(S.translate(c), T.translate(c2)).verdict == v
    rng = random.Random(5)
    for _ in range(40):
        S = Subset.of(16, rng.sample(range(16), 4))
        T = Subset.of(16, rng.sample(range(16), 4))
        v = verify_pair_exact(S, T).verdict
        assert verify_pair_exact(S.translate(rng.randrange(16)), T.translate(rng.randrange(16))).verdict == v


def test_forced_dual_examples():
    f = forced_dual_profile(Subset.of(4, [0, 1]), 2)
    assert f.feasible and f.profile.to_dict() == {"1": 1, "2": 0, "4": 2}
    f = forced_dual_profile(Subset.of(1, [0]), 1)
    assert f.feasible and f.profile.to_dict() == {"1": 1}
    # {0,2} is dual to itself, so its forced dual must be feasible and equal its own profile
    S = Subset.of(4, [0, 2])
    f = forced_dual_profile(S, 2)
    assert f.feasible and f.profile == class_profile(S)
    assert verify_pair_exact(S, S).valid


def test_forced_dual_infeasible_cases():
    f = forced_dual_profile(Subset.of(6, [0, 1]), 3)
    assert not f.feasible and "not an integer" in f.reason
    f = forced_dual_profile(Subset.of(8, [0, 1]), 4)
    assert not f.feasible and "class constant" in f.reason
    with pytest.raises(SizeMismatchError):
        forced_dual_profile(Subset.of(4, [0, 1]), 3)
    f = forced_dual_profile(Subset.of(9, [0, 1, 2]), 3)
    assert not f.feasible


@pytest.mark.parametrize("n,S,T,expected", [
    (4, [0, 1], [0, 1], True),
    (4, [0, 2], [0, 1], False),
    (9, [0, 3, 6], [0, 1, 2], False),
])
def test_is_primitive_pair(n, S, T, expected):
    assert is_primitive_pair(Subset.of(n, S), Subset.of(n, T)) == expected


def test_certificate_roundtrip():
    for S, T in [([0, 1], [0, 1]), ([0, 1], [0, 2])]:
        for verify in (verify_pair_exact, verify_pair_fast):
            c = verify(Subset.of(4, S), Subset.of(4, T))
            assert DualityCertificate.from_dict(c.to_dict()).to_dict() == c.to_dict()
