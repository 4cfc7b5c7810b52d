from fractions import Fraction

import pytest
import sympy

from formaldual.duality import forced_values
from formaldual.numtheory import divisors, moebius, prime_power
from formaldual.profiles import (
    Conclusion,
    ObstructionWitness,
    Outcome,
    admissible_profiles,
    enumerate_profiles,
    odd_prime_obstruction,
    prime_power_gate,
    top_class_value,
    totient_identity,
    unit_class_identity,
)
from formaldual.search import brute_force_oracle
from formaldual.sets import ClassProfile, Subset, class_profile, is_in_proper_coset

NU1 = {1: 1, 2: 1, 4: 0, 8: 0, 16: 4}
NU2 = {1: 1, 2: 0, 4: 2, 8: 0, 16: 4}


def dicts(profiles):
    return [{int(k): v for k, v in p.to_dict().items()} for p in profiles]


def test_z16_two_profiles():
    got = dicts(admissible_profiles(16, 4, primitive_required=True))
    assert sorted(map(sorted, (d.items() for d in got))) == sorted(map(sorted, (NU1.items(), NU2.items())))


def test_small_examples():
    assert dicts(admissible_profiles(4, 2, True)) == [{1: 1, 2: 0, 4: 2}]
    assert admissible_profiles(9, 3, True) == []
    r = enumerate_profiles(9, 3, True)
    assert r.obstruction.conclusion == Conclusion.CONTRADICTION
    assert r.trace["odd_prime_obstruction"] == 1


def test_z27_gate_trace():
    r = enumerate_profiles(27, 3, True)
    assert r.profiles == []
    assert r.gate.outcome == Outcome.REJECT and r.gate.reason == "k_odd"
    assert r.trace["top_class_value_negative"] == 1
    assert r.gate.dual_top_value < 0


def test_profile_level_not_sufficient():
    # without the congruence theorem Z/p^2 keeps a profile that no set realizes
    for p in (3, 5):
        got = dicts(admissible_profiles(p * p, p, True, theorems=False))
        assert got == [{1: 1, p: 0, p * p: p}]


def test_non_divisor_size():
    with pytest.raises(ValueError):
        enumerate_profiles(16, 3)


@pytest.mark.parametrize("p,k,l,outcome,reason", [
    (3, 3, 1, Outcome.REJECT, "k_odd"),
    (3, 4, 2, Outcome.PASS, None),
    (2, 4, 3, Outcome.REJECT, "size_not_square_root"),
])
def test_gate_examples(p, k, l, outcome, reason):
    g = prime_power_gate(p, k, l)
    assert (g.outcome, g.reason) == (outcome, reason)
    if outcome == Outcome.PASS:
        assert g.top_value == 0


def test_gate_property():
    for p in sympy.primerange(2, 51):
        for k in range(1, 11):
            for l in range(0, k + 1):
                g = prime_power_gate(p, k, l)
                # p^l (1 - p^(2l-k)) and its mirror with l -> k - l
                top = p ** l - Fraction(p ** (3 * l), p ** k)
                dual = p ** (k - l) - Fraction(p ** (2 * k), p ** (3 * l))
                assert g.top_value == top and g.dual_top_value == dual
                if k % 2:
                    assert (g.outcome, g.reason) == (Outcome.REJECT, "k_odd")
                elif 2 * l != k:
                    assert (g.outcome, g.reason) == (Outcome.REJECT, "size_not_square_root")
                    assert min(top, dual) < 0
                else:
                    assert g.outcome == Outcome.PASS and top == dual == 0


def test_gate_composite():
    with pytest.raises(ValueError):
        prime_power_gate(6, 2, 1)


def test_top_class_value():
    assert top_class_value(2, 4, 2) == 0
    assert top_class_value(3, 3, 1) == 2


def literal_obstruction(p, l):
    m = p ** (2 * l - 1)
    return (-p ** (2 * l - 2)) % m, (m * (m - 1) // 2) % m


def test_obstruction_examples():
    w = odd_prime_obstruction(3, 1)
    assert (w.lhs, w.rhs, w.conclusion) == (2, 0, Conclusion.CONTRADICTION)
    assert odd_prime_obstruction(2, 1).conclusion == Conclusion.NO_CONTRADICTION
    w = odd_prime_obstruction(5, 2)
    assert (w.modulus, w.lhs, w.rhs, w.conclusion) == (125, 100, 0, Conclusion.CONTRADICTION)
    assert odd_prime_obstruction(7, 2).conclusion == Conclusion.CONTRADICTION
    assert odd_prime_obstruction(2, 3).conclusion == Conclusion.NO_CONTRADICTION


def test_obstruction_table():
    for p in sympy.primerange(3, 98):
        for l in range(1, 6):
            w = odd_prime_obstruction(p, l)
            assert (w.lhs, w.rhs) == literal_obstruction(p, l)
            assert w.conclusion == Conclusion.CONTRADICTION
    for l in range(1, 11):
        w = odd_prime_obstruction(2, l)
        assert (w.lhs, w.rhs) == literal_obstruction(2, l)
        assert w.conclusion == Conclusion.NO_CONTRADICTION
    assert ObstructionWitness.from_dict(w.to_dict()) == w
    with pytest.raises(ValueError):
        odd_prime_obstruction(9, 1)


@pytest.mark.parametrize("n", [4, 8, 9, 12, 16, 18, 25, 27, 30, 32, 36, 64])
def test_emitted_profiles_satisfy_identities(n):
    for s in divisors(n):
        for prim in (False, True):
            for prof in admissible_profiles(n, s, prim):
                t = n // s
                forced = forced_values(prof, t)
                nuT1 = forced[1]
                assert nuT1.denominator == 1 and nuT1 >= 0
                lhs = sum(moebius(n // e) * prof[e] for e in divisors(n))
                assert lhs * t == s * s * nuT1
                general, special = unit_class_identity(prof)
                if prime_power(n):
                    assert general == special
                general, special = totient_identity(prof)
                assert general == special == s * s
                assert prof.violations() == []


@pytest.mark.parametrize("n", range(1, 11))
def test_soundness_against_oracle(n):
    for s in divisors(n):
        admissible = set(admissible_profiles(n, s))
        primitive = set(admissible_profiles(n, s, True))
        for S, T in brute_force_oracle(n, s):
            prof = class_profile(Subset.of(n, S))
            assert prof in admissible
            if not is_in_proper_coset(Subset.of(n, S))[0] and not is_in_proper_coset(Subset.of(n, T))[0]:
                assert prof in primitive


def test_theorem_flag_only_removes():
    for n, s in [(16, 4), (64, 8), (36, 6), (9, 3), (81, 9)]:
        with_t = set(admissible_profiles(n, s, True))
        without = set(admissible_profiles(n, s, True, theorems=False))
        assert with_t <= without


def test_constraint_notes():
    r = enumerate_profiles(16, 4, True)
    names = [c["name"] for c in r.constraints.to_dict()["constraints"]]
    assert "totient_sum" in names and "forced_dual" in names
    d = r.to_dict()
    assert d["count"] == 2 and len(d["profiles"]) == 2
