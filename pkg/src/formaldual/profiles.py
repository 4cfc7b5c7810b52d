"""Candidate weight-enumerator profiles for hypothetical formal-dual sets.

A profile assigns nu(d) to every divisor d of n.  ``admissible_profiles``
enumerates every profile that survives the necessary conditions known for
a set of the requested size, and, with ``primitive_required``, for a set
belonging to a primitive pair.  The conditions are necessary only: a
surviving profile need not be realised by any set.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .duality import class_sum_table
from .numtheory import divisors, euler_phi, is_prime, moebius, prime_power
from .sets import ClassProfile


class Outcome(str, enum.Enum):
    PASS = "Pass"
    REJECT = "Reject"


@dataclass(frozen=True)
class GateVerdict:
    p: int
    k: int
    l: int
    outcome: Outcome
    reason: str | None
    message: str
    top_value: Fraction
    dual_top_value: Fraction

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS

    def to_dict(self) -> dict:
        return {
            "p": self.p, "k": self.k, "l": self.l,
            "outcome": self.outcome.value, "reason": self.reason, "message": self.message,
            "top_value": str(self.top_value), "dual_top_value": str(self.dual_top_value),
        }


def top_class_value(p: int, k: int, l: int) -> Fraction:
    """Forced nu_S(p^(k-1)) = p^l (1 - p^(2l-k)) for a primitive pair with |S| = p^l."""
    return Fraction(p) ** l * (1 - Fraction(p) ** (2 * l - k))


def prime_power_gate(p: int, k: int, l: int) -> GateVerdict:
    """Size test for primitive pairs in Z/p^kZ with |S| = p^l.

    Only k even with |S| = p^(k/2) can pass; otherwise the forced value at
    the class p^(k-1) is negative on the larger of the two sets.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1 or not 0 <= l <= k:
        raise ValueError(f"need k >= 1 and 0 <= l <= k, got k={k}, l={l}")
    top, dual_top = top_class_value(p, k, l), top_class_value(p, k, k - l)
    if k % 2:
        return GateVerdict(p, k, l, Outcome.REJECT, "k_odd",
                           f"k = {k} is odd; a primitive pair needs k even", top, dual_top)
    if 2 * l != k:
        return GateVerdict(p, k, l, Outcome.REJECT, "size_not_square_root",
                           f"|S| = {p}^{l} but a primitive pair needs |S| = {p}^{k // 2}",
                           top, dual_top)
    return GateVerdict(p, k, l, Outcome.PASS, None, "k even and |S| = p^(k/2)", top, dual_top)


class Conclusion(str, enum.Enum):
    CONTRADICTION = "Contradiction"
    NO_CONTRADICTION = "NoContradiction"


@dataclass(frozen=True)
class ObstructionWitness:
    p: int
    l: int
    modulus: int
    lhs: int
    rhs: int
    conclusion: Conclusion

    def to_dict(self) -> dict:
        return {"p": self.p, "l": self.l, "modulus": self.modulus, "lhs": self.lhs,
                "rhs": self.rhs, "conclusion": self.conclusion.value}

    @classmethod
    def from_dict(cls, d: dict) -> ObstructionWitness:
        return cls(d["p"], d["l"], d["modulus"], d["lhs"], d["rhs"], Conclusion(d["conclusion"]))


def odd_prime_obstruction(p: int, l: int) -> ObstructionWitness:
    """Compare -p^(2l-2) with 1 + 2 + ... + (p^(2l-1) - 1) modulo p^(2l-1).

    A set of size p^l in Z/p^(2l)Z with nu(1) = 1 forces the two residues
    to agree; they differ for every odd p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if l < 1:
        raise ValueError("l must be >= 1")
    m = p ** (2 * l - 1)
    lhs = (-p ** (2 * l - 2)) % m
    rhs = (m * (m - 1) // 2) % m
    return ObstructionWitness(p, l, m, lhs, rhs,
                              Conclusion.CONTRADICTION if lhs != rhs else Conclusion.NO_CONTRADICTION)


@dataclass
class ProfileConstraintSet:
    n: int
    size_S: int
    size_T: int
    primitive_required: bool
    theorems: bool = True
    constraints: list[dict] = field(default_factory=list)

    def note(self, name: str, statement: str):
        self.constraints.append({"name": name, "statement": statement})

    def to_dict(self) -> dict:
        return {"n": self.n, "size_S": self.size_S, "size_T": self.size_T,
                "primitive_required": self.primitive_required, "theorems": self.theorems,
                "constraints": list(self.constraints)}


@dataclass
class ProfileSearch:
    constraints: ProfileConstraintSet
    profiles: list[ClassProfile]
    trace: Counter
    gate: GateVerdict | None = None
    obstruction: ObstructionWitness | None = None
    nodes: int = 0

    def to_dict(self) -> dict:
        n = self.constraints.n
        return {
            "n": n,
            "size_S": self.constraints.size_S,
            "size_T": self.constraints.size_T,
            "primitive_required": self.constraints.primitive_required,
            "profiles": [p.to_dict() for p in self.profiles],
            "count": len(self.profiles),
            "trace": dict(sorted(self.trace.items())),
            "constraints": self.constraints.constraints,
            "gate": self.gate.to_dict() if self.gate else None,
            "obstruction": self.obstruction.to_dict() if self.obstruction else None,
            "nodes": self.nodes,
        }


def coset_divisor_of_profile(n: int, values: dict[int, int]) -> int:
    """gcd of n and every divisor class carrying a nonzero difference."""
    g = n
    for d, v in values.items():
        if d != n and v:
            g = gcd(g, d)
    return g


def enumerate_profiles(n: int, size_S: int, primitive_required: bool = False,
                       theorems: bool = True) -> ProfileSearch:
    """Depth-first enumeration of admissible profiles with a constraint trace.

    ``theorems=False`` drops the prime-power-only restrictions (the size
    gate, the forced values at classes 1 and p^(k-1), and the odd-prime
    congruence) and keeps only conditions valid for every n.
    """
    if n < 1 or size_S < 1 or n % size_S:
        raise ValueError(f"size {size_S} does not divide n = {n}")
    s, t = size_S, n // size_S
    cs = ProfileConstraintSet(n, s, t, primitive_required, theorems)
    trace: Counter = Counter()
    result = ProfileSearch(cs, [], trace)
    divs = divisors(n)
    lo = {d: 0 for d in divs}
    hi = {d: s for d in divs}
    lo[n] = hi[n] = s
    cs.note("zero_class", "nu(n) = |S|")
    cs.note("pair_bound", "0 <= nu(d) <= |S|")
    cs.note("totient_sum", "sum_d phi(n/d) nu(d) = |S|^2")
    cs.note("forced_dual", "|T| sum_e C_n(d,e) nu(e) / |S|^2 is an integer in [0, |T|] for every d")
    even_half = n % 2 == 0 and n > 1
    if even_half:
        cs.note("half_even", "nu(n/2) is even")
    # dual-side bounds on the forced values nu_T(d)
    lo_T = {d: 0 for d in divs}
    hi_T = {d: t for d in divs}
    lo_T[n] = hi_T[n] = t

    pp = prime_power(n)
    if primitive_required:
        cs.note("primitive", "the classes carrying nonzero nu generate Z/nZ, for S and for T")
        if pp is not None and theorems:
            p, k = pp
            l = 0
            while p ** l < s:
                l += 1
            gate = prime_power_gate(p, k, l)
            result.gate = gate
            if not gate.passed:
                trace[gate.reason] += 1
                if gate.top_value < 0 or gate.dual_top_value < 0:
                    trace["top_class_value_negative"] += 1
                cs.note(gate.reason, gate.message)
                cs.note("top_class_value_negative",
                        f"forced nu_S(p^(k-1)) = {gate.top_value}, "
                        f"forced nu_T(p^(k-1)) = {gate.dual_top_value}")
                return result
            if p % 2 and theorems:
                w = odd_prime_obstruction(p, l)
                result.obstruction = w
                if w.conclusion is Conclusion.CONTRADICTION:
                    trace["odd_prime_obstruction"] += 1
                    cs.note("odd_prime_obstruction",
                            f"-p^(2l-2) = {w.lhs} and the sum 0+1+...+(p^(2l-1)-1) = {w.rhs} "
                            f"disagree modulo {w.modulus}")
                    return result
            top = p ** (k - 1)
            for side_lo, side_hi in ((lo, hi), (lo_T, hi_T)):
                side_lo[1] = side_hi[1] = 1
                side_lo[top] = side_hi[top] = 0
            cs.note("unit_class_one", "nu(1) = 1 for both sets")
            cs.note("top_class_zero", "nu(p^(k-1)) = 0 for both sets")
        if pp is not None:
            lo[1] = max(lo[1], 1)
            lo_T[1] = max(lo_T[1], 1)
            cs.note("unit_class_positive", "nu(1) >= 1 for both sets")
    if even_half:
        h = n // 2
        if lo[h] % 2:
            lo[h] += 1
        if hi[h] % 2:
            hi[h] -= 1
    if any(lo[d] > hi[d] for d in divs):
        trace["empty_domain"] += 1
        return result

    # Enumerate on the smaller side; the dual transform is an involution on
    # profiles, so each admissible pair is reached from either end.
    if t < s:
        result.constraints.note("enumerated_side", "T (the smaller set); S profiles are forced from it")
        pairs = _enumerate(n, t, s, lo_T, hi_T, lo, hi, even_half, primitive_required, trace, result)
        found = [ClassProfile(n, forced) for _, forced in pairs]
    else:
        pairs = _enumerate(n, s, t, lo, hi, lo_T, hi_T, even_half, primitive_required, trace, result)
        found = [ClassProfile(n, values) for values, _ in pairs]
    found.sort(key=lambda p: p.vector(), reverse=True)
    result.profiles = found
    return result


def _enumerate(n, s, t, lo, hi, lo_T, hi_T, even_half, primitive_required, trace, result):
    """Depth-first search over the free values of one side.

    Returns (values, forced dual values) pairs as divisor-keyed dicts.
    """
    divs = divisors(n)
    nd = len(divs)
    table = class_sum_table(n)
    s2 = s * s
    # windows for L_d = sum_e C(d,e) nu(e), from lo_T(d) <= t L_d / s^2 <= hi_T(d)
    L_lo = [-(-lo_T[d] * s2 // t) for d in divs]
    L_hi = [hi_T[d] * s2 // t for d in divs]
    phi = {d: euler_phi(n // d) for d in divs}
    free = sorted((d for d in divs if lo[d] != hi[d]), key=lambda d: (-phi[d], d))
    fixed = {d: lo[d] for d in divs if lo[d] == hi[d]}
    col = {e: [table[d, e] for d in divs] for e in divs}

    m = len(free)
    tot_max = [0] * (m + 1)
    tot_min = [0] * (m + 1)
    L_max = [[0] * nd for _ in range(m + 1)]
    L_min = [[0] * nd for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        e = free[i]
        tot_max[i] = tot_max[i + 1] + phi[e] * hi[e]
        tot_min[i] = tot_min[i + 1] + phi[e] * lo[e]
        for j in range(nd):
            a, b = col[e][j] * lo[e], col[e][j] * hi[e]
            L_max[i][j] = L_max[i + 1][j] + max(a, b)
            L_min[i][j] = L_min[i + 1][j] + min(a, b)

    values = dict(fixed)
    tot0 = sum(phi[d] * v for d, v in fixed.items())
    L0 = [sum(table[d, e] * v for e, v in fixed.items()) for d in divs]
    out = []
    half = n // 2

    def leaf(L):
        forced = {}
        for j, d in enumerate(divs):
            num = t * L[j]
            if num % s2:
                trace["forced_dual_integrality"] += 1
                return
            forced[d] = num // s2
        if even_half and forced[half] % 2:
            trace["dual_half_even"] += 1
            return
        if primitive_required:
            if coset_divisor_of_profile(n, values) != 1:
                trace["primitive_coset"] += 1
                return
            if coset_divisor_of_profile(n, forced) != 1:
                trace["dual_primitive_coset"] += 1
                return
        out.append((dict(values), forced))

    def rec(i, tot, L):
        result.nodes += 1
        rem = s2 - tot
        if rem < tot_min[i] or rem > tot_max[i]:
            trace["totient_sum"] += 1
            return
        Lmx, Lmn = L_max[i], L_min[i]
        for j in range(nd):
            if L[j] + Lmx[j] < L_lo[j] or L[j] + Lmn[j] > L_hi[j]:
                trace["forced_dual_range"] += 1
                return
        if i == m:
            leaf(L)
            return
        e = free[i]
        ce = col[e]
        step = 2 if even_half and e == half else 1
        for v in range(lo[e], hi[e] + 1, step):
            values[e] = v
            rec(i + 1, tot + phi[e] * v, [L[j] + ce[j] * v for j in range(nd)])
        del values[e]

    rec(0, tot0, L0)
    return out


def admissible_profiles(n: int, size_S: int, primitive_required: bool = False,
                        theorems: bool = True) -> list[ClassProfile]:
    return enumerate_profiles(n, size_S, primitive_required, theorems).profiles


def unit_class_identity(profile: ClassProfile) -> tuple[int, int]:
    """sum_e mu(n/e) nu(e) in general form and, for n = p^k, as nu(0) - nu(p^(k-1))."""
    n = profile.n
    general = sum(moebius(n // e) * v for e, v in profile.values.items())
    pp = prime_power(n)
    if pp is None:
        return general, general
    p, k = pp
    return general, profile[n] - profile[p ** (k - 1)]


def totient_identity(profile: ClassProfile) -> tuple[int, int]:
    """sum_e phi(n/e) nu(e) in general form and in the expanded prime-power form."""
    n = profile.n
    general = profile.totient_sum()
    pp = prime_power(n)
    if pp is None:
        return general, general
    p, k = pp
    expanded = profile[n] + sum((p - 1) * p ** (k - j - 1) * profile[p ** j] for j in range(k))
    return general, expanded
