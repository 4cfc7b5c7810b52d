"""Dense polynomials with arbitrary-precision integer coefficients.

A polynomial a_0 + a_1 x + ... + a_n x^n is stored as the tuple
(a_0, a_1, ..., a_n) with a_n != 0; the zero polynomial is ().
Only what exact arithmetic in Z[x]/(x^n - 1) and Z[x]/(Phi_n) needs is
provided: ring operations, division by monic polynomials and reduction
modulo x^n - 1.
"""

from __future__ import annotations

from typing import Iterable


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPolynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _trim(int(a) for a in coeffs)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPolynomial:
        return cls([0] * degree + [coeff])

    @classmethod
    def from_exponents(cls, exponents: Iterable[tuple[int, int]]) -> IntPolynomial:
        """Build sum c * x^e from (e, c) pairs; repeated exponents accumulate."""
        acc: dict[int, int] = {}
        for e, c in exponents:
            acc[e] = acc.get(e, 0) + c
        if not acc:
            return cls()
        out = [0] * (max(acc) + 1)
        for e, c in acc.items():
            out[e] = c
        return cls(out)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial([other])
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[e]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if e == 0:
                body = str(mag)
            else:
                xe = "x" if e == 1 else f"x^{e}"
                body = xe if mag == 1 else f"{mag}*{xe}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __add__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            other = IntPolynomial((other,))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    __radd__ = __add__

    def __sub__(self, other) -> IntPolynomial:
        return self + (-other)

    def __rsub__(self, other) -> IntPolynomial:
        return -self + other

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Quotient and remainder by a monic divisor, exactly over Z."""
        if divisor.is_zero() or divisor.leading() != 1:
            raise ValueError("divisor must be monic")
        r = list(self.coeffs)
        dd = divisor.degree
        if len(r) - 1 < dd:
            return IntPolynomial(), self
        dc = divisor.coeffs
        q = [0] * (len(r) - dd)
        for i in range(len(r) - 1, dd - 1, -1):
            c = r[i]
            if c == 0:
                continue
            q[i - dd] = c
            base = i - dd
            for j in range(dd + 1):
                r[base + j] -= c * dc[j]
        return IntPolynomial(q), IntPolynomial(r[:dd])

    def __floordiv__(self, divisor: IntPolynomial) -> IntPolynomial:
        return self.divmod_monic(divisor)[0]

    def __mod__(self, divisor: IntPolynomial) -> IntPolynomial:
        return self.divmod_monic(divisor)[1]

    def reduce_cyclic(self, n: int) -> IntPolynomial:
        """Reduce modulo x^n - 1 by folding exponents."""
        out = [0] * n
        for e, c in enumerate(self.coeffs):
            out[e % n] += c
        return IntPolynomial(out)

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc
