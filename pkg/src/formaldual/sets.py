"""Subsets of Z/nZ and the difference statistics used throughout.

A :class:`Subset` is a bit-vector (a Python int) over the residues of
Z/nZ.  The weight enumerator counts ordered pairs by difference; its
compression to gcd classes is a :class:`ClassProfile`, keyed by the
divisors of n with the class of 0 stored under the key n.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping

from . import kernels
from .numtheory import divisors, euler_phi

MAX_N = 4096


def set_max_n(cap: int) -> None:
    """Change the largest admissible group order."""
    global MAX_N
    if cap < 1:
        raise ValueError("cap must be positive")
    MAX_N = cap


@lru_cache(maxsize=None)
def _group(n: int) -> CyclicGroup:
    return CyclicGroup(n)


@dataclass(frozen=True)
class CyclicGroup:
    n: int
    divisor_list: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"group order must be a positive integer, got {self.n!r}")
        if self.n > MAX_N:
            raise ValueError(f"group order {self.n} exceeds the cap {MAX_N}")
        object.__setattr__(self, "divisor_list", divisors(self.n))

    def gcd_class(self, y: int) -> int:
        """Divisor d = gcd(y, n) labelling the class of y (d = n for y = 0)."""
        return gcd(y % self.n, self.n)

    def class_members(self, d: int) -> list[int]:
        return [y for y in range(self.n) if gcd(y, self.n) == d]

    def class_size(self, d: int) -> int:
        return euler_phi(self.n // d)


@dataclass(frozen=True)
class Subset:
    """A subset of Z/nZ stored as a bit mask (bit r set iff r is a member)."""

    n: int
    mask: int

    def __post_init__(self):
        if isinstance(self.n, int) and self.n > MAX_N:
            raise ValueError(f"group order {self.n} exceeds the cap {MAX_N}")
        _group(self.n)
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError("mask has bits outside [0, n)")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> Subset:
        """Build from residues; duplicates are rejected, values must lie in [0, n)."""
        mask = 0
        for r in members:
            if not 0 <= r < n:
                raise ValueError(f"residue {r} outside [0, {n})")
            bit = 1 << r
            if mask & bit:
                raise ValueError(f"duplicate residue {r}")
            mask |= bit
        return cls(n, mask)

    @property
    def group(self) -> CyclicGroup:
        return _group(self.n)

    @property
    def members(self) -> tuple[int, ...]:
        m, out, r = self.mask, [], 0
        while m:
            if m & 1:
                out.append(r)
            m >>= 1
            r += 1
        return tuple(out)

    def __len__(self) -> int:
        return self.mask.bit_count() if hasattr(int, "bit_count") else bin(self.mask).count("1")

    def __contains__(self, r: int) -> bool:
        return 0 <= r < self.n and bool(self.mask >> r & 1)

    def __iter__(self):
        return iter(self.members)

    def translate(self, c: int) -> Subset:
        return Subset.of(self.n, ((r + c) % self.n for r in self.members))

    def scale(self, u: int) -> Subset:
        """Image under multiplication by u; u must be a unit."""
        if gcd(u, self.n) != 1:
            raise ValueError(f"{u} is not a unit mod {self.n}")
        return Subset.of(self.n, ((u * r) % self.n for r in self.members))

    def negate(self) -> Subset:
        return self.scale(self.n - 1) if self.n > 1 else self

    def to_list(self) -> list[int]:
        return list(self.members)

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


@dataclass(frozen=True)
class WeightEnumerator:
    n: int
    counts: tuple[int, ...]

    @property
    def group(self) -> CyclicGroup:
        return _group(self.n)

    @property
    def size(self) -> int:
        return self.counts[0]

    def __getitem__(self, y: int) -> int:
        return self.counts[y % self.n]


@dataclass(frozen=True)
class ClassProfile:
    """A weight enumerator compressed to one value per divisor of n."""

    n: int
    values: Mapping[int, int]

    def __post_init__(self):
        divs = divisors(self.n)
        vals = {int(k): int(v) for k, v in dict(self.values).items()}
        if sorted(vals) != list(divs):
            raise ValueError(f"profile keys must be exactly the divisors of {self.n}")
        if any(v < 0 for v in vals.values()):
            raise ValueError("profile values must be nonnegative")
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    @property
    def size(self) -> int:
        return self.values[self.n]

    def __getitem__(self, d: int) -> int:
        return self.values[d]

    def __hash__(self):
        return hash((self.n, tuple(self.values.items())))

    def __eq__(self, other):
        if not isinstance(other, ClassProfile):
            return NotImplemented
        return self.n == other.n and self.values == other.values

    def totient_sum(self) -> int:
        return sum(euler_phi(self.n // d) * v for d, v in self.values.items())

    def expand(self) -> tuple[int, ...]:
        """The full residue-indexed enumerator this profile stands for."""
        n = self.n
        return tuple(self.values[gcd(y, n)] for y in range(n))

    def violations(self) -> list[str]:
        """Structural invariants of a profile realised by a set of size ν(n)."""
        out = []
        s = self.size
        if any(v > s for v in self.values.values()):
            out.append("value exceeds set size")
        if self.totient_sum() != s * s:
            out.append("totient-weighted sum differs from size squared")
        if self.n % 2 == 0 and self.n > 1 and self.values[self.n // 2] % 2:
            out.append("value at n/2 is odd")
        return out

    def vector(self) -> tuple[int, ...]:
        return tuple(self.values.values())

    def to_dict(self) -> dict[str, int]:
        return {str(d): v for d, v in self.values.items()}

    @classmethod
    def from_dict(cls, n: int, data: Mapping) -> ClassProfile:
        return cls(n, {int(k): int(v) for k, v in data.items()})


@dataclass(frozen=True)
class NotClassConstant:
    """Two residues of one gcd class on which the enumerator disagrees."""

    n: int
    y1: int
    y2: int
    value1: int
    value2: int

    @property
    def divisor(self) -> int:
        return gcd(self.y1, self.n)

    def to_dict(self) -> dict:
        return {"y1": self.y1, "y2": self.y2, "nu_y1": self.value1, "nu_y2": self.value2}


def weight_enumerator(S: Subset) -> WeightEnumerator:
    if len(S) == 0:
        raise ValueError("weight enumerator of the empty set is not used")
    return WeightEnumerator(S.n, tuple(kernels.weight_counts(S.n, S.members)))


def gcd_class_profile(nu: WeightEnumerator) -> ClassProfile | NotClassConstant:
    """Compress ν to its divisor profile, or return a class-constancy witness.

    The witness compares the class representative d with the residue of
    the same class that deviates most, preferring surplus, then the
    smallest residue.
    """
    n = nu.n
    for d in divisors(n):
        ref = nu.counts[d % n]
        worst = None
        for y in range(n):
            if gcd(y, n) != d or nu.counts[y] == ref:
                continue
            key = (abs(nu.counts[y] - ref), nu.counts[y], -y)
            if worst is None or key > worst[0]:
                worst = (key, y)
        if worst is not None:
            y = worst[1]
            return NotClassConstant(n, d % n, y, ref, nu.counts[y])
    return ClassProfile(n, {d: nu.counts[d % n] for d in divisors(n)})


def class_profile(S: Subset) -> ClassProfile | NotClassConstant:
    return gcd_class_profile(weight_enumerator(S))


def proper_coset_divisor(S: Subset) -> int:
    """g = gcd(n, all pairwise differences); S lies in a coset of gZ/nZ."""
    ms = S.members
    g = S.n
    if ms:
        a = ms[0]
        for b in ms[1:]:
            g = gcd(g, b - a)
    return g


def is_in_proper_coset(S: Subset) -> tuple[bool, int]:
    g = proper_coset_divisor(S)
    return g > 1, g


def _check_divisor(n: int, m: int) -> None:
    if m < 1 or n % m:
        raise ValueError(f"m={m} is not a divisor of n={n}")


def coset_counts(S: Subset, m: int) -> list[int]:
    _check_divisor(S.n, m)
    out = [0] * m
    for r in S.members:
        out[r % m] += 1
    return out


class CosetDistribution(str, enum.Enum):
    UNIFORM = "Uniform"
    NOT_APPLICABLE = "NotApplicable"
    VIOLATES_LEMMA = "ViolatesLemma"


def check_equal_coset_distribution(S: Subset, m: int) -> CosetDistribution:
    """Pairs with difference divisible by m number |S|^2/m => cosets are balanced."""
    _check_divisor(S.n, m)
    nu = weight_enumerator(S)
    pairs = sum(nu.counts[y] for y in range(0, S.n, m))
    s = len(S)
    if pairs * m != s * s:
        return CosetDistribution.NOT_APPLICABLE
    counts = coset_counts(S, m)
    if all(c * m == s for c in counts):
        return CosetDistribution.UNIFORM
    return CosetDistribution.VIOLATES_LEMMA


def symmetry_multipliers(n: int, units: bool = False) -> list[int]:
    """Multipliers of the symmetry group: {1, -1}, or every unit mod n."""
    if n <= 2:
        return [1]
    if units:
        return [u for u in range(1, n) if gcd(u, n) == 1]
    return [1, n - 1]


def canonical_form(S: Subset, units: bool = False) -> Subset:
    """Lexicographically least image of S under translation and negation.

    With ``units=True`` the orbit is taken under all affine maps x -> u*x + c
    with u a unit.
    """
    if len(S) == 0:
        raise ValueError("canonical form of the empty set is undefined")
    mult = symmetry_multipliers(S.n, units)
    return Subset.of(S.n, kernels.canonical_members(S.n, S.members, mult))


def all_subsets(n: int, size: int | None = None) -> Iterable[Subset]:
    """Every nonempty subset of Z/nZ (of the given size), in a fixed order."""
    from itertools import combinations

    sizes = range(1, n + 1) if size is None else [size]
    for k in sizes:
        for combo in combinations(range(n), k):
            yield Subset.of(n, combo)
