"""Exact verification of formal duality between subsets of Z/nZ.

Two independent routes decide whether

    (|S|^2 / |T|) * nu_T(y) == sum_v nu_S(v) * zeta_n^(v*y)   for all y.

``verify_pair_exact`` reduces the right-hand side in Z[x]/(Phi_n) for
every residue y, so it assumes nothing about the shape of nu.
``verify_pair_fast`` first checks that both enumerators are constant on
gcd classes and then compares one divisor per class using Ramanujan class
sums, all in integers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .numtheory import cyclotomic_poly, divisors, euler_phi, ramanujan_sum_class
from .polynomial import IntPolynomial
from .sets import (
    ClassProfile,
    NotClassConstant,
    Subset,
    gcd_class_profile,
    is_in_proper_coset,
    weight_enumerator,
)


class SizeMismatchError(ValueError):
    """|S| * |T| != n, so the sets cannot be formally dual."""

    def __init__(self, n: int, size_S: int, size_T: int):
        self.n, self.size_S, self.size_T = n, size_S, size_T
        super().__init__(
            f"|S|*|T| = {size_S}*{size_T} = {size_S * size_T} != n = {n}; "
            "formally dual sets satisfy n = |S|*|T|"
        )


class Verdict(str, enum.Enum):
    VALID = "Valid"
    INVALID = "Invalid"


class Route(str, enum.Enum):
    EXACT_CYCLOTOMIC = "ExactCyclotomic"
    RAMANUJAN_CLASS_SUMS = "RamanujanClassSums"


@dataclass(frozen=True)
class Violation:
    y: int
    lhs: str
    rhs: str
    kind: str = "identity"
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"y": self.y, "lhs": self.lhs, "rhs": self.rhs, "kind": self.kind,
                "detail": dict(self.detail)}

    @classmethod
    def from_dict(cls, d: dict) -> Violation:
        return cls(d["y"], d["lhs"], d["rhs"], d.get("kind", "identity"), dict(d.get("detail", {})))


@dataclass(frozen=True)
class DualityCertificate:
    n: int
    S: Subset
    T: Subset
    verdict: Verdict
    route: Route
    nu_S: tuple[int, ...]
    nu_T: tuple[int, ...]
    violation: Violation | None = None
    profile_S: ClassProfile | None = None
    profile_T: ClassProfile | None = None

    @property
    def valid(self) -> bool:
        return self.verdict is Verdict.VALID

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "S": self.S.to_list(),
            "T": self.T.to_list(),
            "verdict": self.verdict.value,
            "route": self.route.value,
            "nu_S": list(self.nu_S),
            "nu_T": list(self.nu_T),
            "violation": self.violation.to_dict() if self.violation else None,
            "profile_S": self.profile_S.to_dict() if self.profile_S else None,
            "profile_T": self.profile_T.to_dict() if self.profile_T else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> DualityCertificate:
        n = d["n"]
        return cls(
            n=n,
            S=Subset.of(n, d["S"]),
            T=Subset.of(n, d["T"]),
            verdict=Verdict(d["verdict"]),
            route=Route(d["route"]),
            nu_S=tuple(d["nu_S"]),
            nu_T=tuple(d["nu_T"]),
            violation=Violation.from_dict(d["violation"]) if d.get("violation") else None,
            profile_S=ClassProfile.from_dict(n, d["profile_S"]) if d.get("profile_S") else None,
            profile_T=ClassProfile.from_dict(n, d["profile_T"]) if d.get("profile_T") else None,
        )


def _check_sizes(S: Subset, T: Subset) -> None:
    if S.n != T.n:
        raise ValueError("S and T live in different groups")
    if len(S) == 0 or len(T) == 0:
        raise ValueError("S and T must be nonempty")
    if len(S) * len(T) != S.n:
        raise SizeMismatchError(S.n, len(S), len(T))


@lru_cache(maxsize=4096)
def character_sum_residues(n: int, nu_S: tuple[int, ...]) -> tuple[IntPolynomial, ...]:
    """For each y, sum_v nu_S(v) x^(v*y mod n) reduced modulo Phi_n."""
    phi = cyclotomic_poly(n)
    out = []
    for y in range(n):
        poly = IntPolynomial.from_exponents(((v * y) % n, c) for v, c in enumerate(nu_S) if c)
        out.append(poly % phi)
    return tuple(out)


def _fraction_str(num: int, den: int) -> str:
    return str(Fraction(num, den))


def _profiles(nu_S, nu_T):
    pS, pT = gcd_class_profile(nu_S), gcd_class_profile(nu_T)
    return (pS if isinstance(pS, ClassProfile) else None,
            pT if isinstance(pT, ClassProfile) else None)


def exact_identity_failure(n: int, nu_S: tuple[int, ...], nu_T: tuple[int, ...],
                           size_S: int, size_T: int) -> Violation | None:
    """First residue y at which the duality identity fails in Q(zeta_n)."""
    residues = character_sum_residues(n, nu_S)
    for y in range(n):
        r = residues[y]
        target = size_S * size_S * nu_T[y]
        if (r * size_T - IntPolynomial([target])).is_zero():
            continue
        return Violation(y=y, lhs=_fraction_str(target, size_T), rhs=str(r),
                         detail={"rhs_coeffs": list(r.coeffs)})
    return None


def verify_pair_exact(S: Subset, T: Subset) -> DualityCertificate:
    _check_sizes(S, T)
    n = S.n
    nu_S, nu_T = weight_enumerator(S), weight_enumerator(T)
    bad = exact_identity_failure(n, nu_S.counts, nu_T.counts, len(S), len(T))
    if bad is not None:
        return DualityCertificate(n, S, T, Verdict.INVALID, Route.EXACT_CYCLOTOMIC,
                                  nu_S.counts, nu_T.counts, violation=bad)
    pS, pT = _profiles(nu_S, nu_T)
    # A valid pair with a class-inconstant enumerator would contradict the
    # structure theorem; surface it loudly rather than issue a certificate.
    if pS is None or pT is None:
        raise AssertionError(f"valid pair {S}, {T} with non class-constant enumerator")
    return DualityCertificate(n, S, T, Verdict.VALID, Route.EXACT_CYCLOTOMIC,
                              nu_S.counts, nu_T.counts, profile_S=pS, profile_T=pT)


@lru_cache(maxsize=256)
def class_sum_table(n: int) -> dict[tuple[int, int], int]:
    divs = divisors(n)
    return {(d, e): ramanujan_sum_class(n, d, e) for d in divs for e in divs}


def class_sum(n: int, d: int, profile: ClassProfile) -> int:
    """sum_e C_n(d, e) * nu(e)."""
    table = class_sum_table(n)
    return sum(table[d, e] * v for e, v in profile.values.items())


def _not_constant_violation(side: str, w: NotClassConstant) -> Violation:
    return Violation(
        y=w.y2, lhs=f"nu_{side}({w.y1}) = {w.value1}", rhs=f"nu_{side}({w.y2}) = {w.value2}",
        kind="not_class_constant", detail={"side": side, **w.to_dict()},
    )


def verify_pair_fast(S: Subset, T: Subset) -> DualityCertificate:
    _check_sizes(S, T)
    n, s, t = S.n, len(S), len(T)
    nu_S, nu_T = weight_enumerator(S), weight_enumerator(T)
    route = Route.RAMANUJAN_CLASS_SUMS
    pS, pT = gcd_class_profile(nu_S), gcd_class_profile(nu_T)
    for side, p in (("S", pS), ("T", pT)):
        if isinstance(p, NotClassConstant):
            return DualityCertificate(n, S, T, Verdict.INVALID, route, nu_S.counts,
                                      nu_T.counts, violation=_not_constant_violation(side, p))
    for d in divisors(n):
        lhs = s * s * pT[d]
        rhs = t * class_sum(n, d, pS)
        if lhs != rhs:
            bad = Violation(y=d % n, lhs=_fraction_str(lhs, t), rhs=_fraction_str(rhs, t),
                            detail={"divisor": d})
            return DualityCertificate(n, S, T, Verdict.INVALID, route, nu_S.counts,
                                      nu_T.counts, violation=bad)
    return DualityCertificate(n, S, T, Verdict.VALID, route, nu_S.counts, nu_T.counts,
                              profile_S=pS, profile_T=pT)


@dataclass(frozen=True)
class ForcedDualProfile:
    n: int
    size_S: int
    size_T: int
    values: dict[int, Fraction]
    profile: ClassProfile | None
    reason: str | None = None

    @property
    def feasible(self) -> bool:
        return self.profile is not None

    def to_dict(self) -> dict:
        return {
            "values": {str(d): str(v) for d, v in self.values.items()},
            "feasible": self.feasible,
            "profile": self.profile.to_dict() if self.profile else None,
            "reason": self.reason,
        }


def forced_values(profile_S: ClassProfile, size_T: int) -> dict[int, Fraction]:
    """The dual values nu_T(d) = |T| * sum_e C_n(d, e) nu_S(e) / |S|^2."""
    n, s = profile_S.n, profile_S.size
    return {d: Fraction(size_T * class_sum(n, d, profile_S), s * s) for d in divisors(n)}


def judge_forced(n: int, size_S: int, size_T: int, values: dict[int, Fraction]) -> ForcedDualProfile:
    def infeasible(reason):
        return ForcedDualProfile(n, size_S, size_T, values, None, reason)

    for d, v in values.items():
        if v.denominator != 1:
            return infeasible(f"nu_T({d}) = {v} is not an integer")
        if v < 0:
            return infeasible(f"nu_T({d}) = {v} is negative")
        if v > size_T:
            return infeasible(f"nu_T({d}) = {v} exceeds |T| = {size_T}")
    if values[n] != size_T:
        return infeasible(f"nu_T(0) = {values[n]} differs from |T| = {size_T}")
    ints = {d: int(v) for d, v in values.items()}
    if sum(euler_phi(n // d) * v for d, v in ints.items()) != size_T * size_T:
        return infeasible("totient-weighted sum differs from |T|^2")
    if n % 2 == 0 and n > 1 and ints[n // 2] % 2:
        return infeasible(f"nu_T({n // 2}) is odd")
    return ForcedDualProfile(n, size_S, size_T, values, ClassProfile(n, ints))


def forced_dual_profile(S: Subset, size_T: int) -> ForcedDualProfile:
    n, s = S.n, len(S)
    if s == 0 or size_T < 1 or s * size_T != n:
        raise SizeMismatchError(n, s, size_T)
    p = gcd_class_profile(weight_enumerator(S))
    if isinstance(p, NotClassConstant):
        return ForcedDualProfile(n, s, size_T, {}, None,
                                 f"nu_S not class constant: nu({p.y1}) = {p.value1} "
                                 f"but nu({p.y2}) = {p.value2}")
    return judge_forced(n, s, size_T, forced_values(p, size_T))


def is_primitive_pair(S: Subset, T: Subset) -> bool:
    return not is_in_proper_coset(S)[0] and not is_in_proper_coset(T)[0]
