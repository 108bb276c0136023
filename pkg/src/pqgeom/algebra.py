"""Arithmetic of split quaternions (para-quaternions).

The algebra is the real span of 1, i, j, k with

    i^2 = -1,   j^2 = k^2 = +1,
    ij = -ji = k,   jk = -kj = -i,   ki = -ik = j.

With e_1, e_2, e_3 = i, j, k and the sign constants
eps = (1, -1, -1) this is the cyclic product table
e_a e_b = -eps_c e_c.  Note that part of the literature uses the
opposite convention ij = -k (the two algebras are isomorphic via
k -> -k); every formula in this package assumes the table above.

The indefinite square norm |q|^2 = a^2 + b^2 - c^2 - d^2 is
multiplicative but has null vectors (1 + j is a zero divisor), so
inversion exists only off the null cone.

Coefficients may be exact (int / fractions.Fraction) or floats; exact
inputs are never rounded.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

EPS = (1, -1, -1)  # signs of -i^2, -j^2, -k^2


class NullQuaternionError(ZeroDivisionError):
    """Inversion attempted on the null cone |q|^2 = 0."""


@dataclass(frozen=True)
class ScalarField:
    """Comparison policy: exact rationals, or floats with a relative tolerance."""

    exact: bool = True
    tolerance: float = 1e-9

    @classmethod
    def exact_field(cls) -> "ScalarField":
        return cls(exact=True)

    @classmethod
    def floating(cls, tolerance: float = 1e-9) -> "ScalarField":
        return cls(exact=False, tolerance=tolerance)

    def close(self, a, b) -> bool:
        if self.exact:
            return a == b
        scale = max(abs(a), abs(b), 1.0)
        return abs(a - b) <= self.tolerance * scale

    def is_zero(self, a) -> bool:
        if self.exact:
            return a == 0
        return abs(a) <= self.tolerance


class SplitQuaternion:
    """One element a + b i + c j + d k."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    # -- basic structure ------------------------------------------------

    def coefficients(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash(self.coefficients())

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return SplitQuaternion(self.a + other.a, self.b + other.b,
                               self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return SplitQuaternion(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return SplitQuaternion(
            a * e - b * f + c * g + d * h,
            a * f + b * e - c * h + d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )

    def __rmul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self

    def __truediv__(self, scalar):
        if isinstance(scalar, SplitQuaternion):
            return self * scalar.inverse()
        return SplitQuaternion(self.a / scalar, self.b / scalar,
                               self.c / scalar, self.d / scalar)

    def scale(self, s) -> "SplitQuaternion":
        return SplitQuaternion(self.a * s, self.b * s, self.c * s, self.d * s)

    # -- conjugation and norms ------------------------------------------

    def conj(self) -> "SplitQuaternion":
        return SplitQuaternion(self.a, -self.b, -self.c, -self.d)

    def square_norm(self):
        return self.a * self.a + self.b * self.b - self.c * self.c - self.d * self.d

    def real(self):
        return self.a

    def imag(self) -> "SplitQuaternion":
        return SplitQuaternion(0, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def inverse(self, field: ScalarField | None = None) -> "SplitQuaternion":
        n = self.square_norm()
        null = (n == 0) if field is None or field.exact else field.is_zero(n)
        if null:
            raise NullQuaternionError(f"{self} lies on the null cone")
        return self.conj().scale(1 / n if isinstance(n, float) else Fraction(1, 1) / n)

    def commutator(self, other: "SplitQuaternion") -> "SplitQuaternion":
        return self * other - other * self

    # -- complex picture -------------------------------------------------

    def complex_rep(self) -> tuple[complex, complex]:
        """Pair (z1, z2) = (a + b i, c - d i) with q = z1 + j z2."""
        return complex(self.a, self.b), complex(self.c, -self.d)

    def complex_rep_exact(self):
        """Same pair as (re, im) tuples, kept in the scalar type of q."""
        return (self.a, self.b), (self.c, -self.d)

    @classmethod
    def from_complex_rep(cls, z1, z2) -> "SplitQuaternion":
        """Inverse of complex_rep; accepts complex numbers or (re, im) pairs."""
        r1, i1 = (z1.real, z1.imag) if isinstance(z1, complex) else z1
        r2, i2 = (z2.real, z2.imag) if isinstance(z2, complex) else z2
        return cls(r1, i1, r2, -i2)

    # -- parse / print ----------------------------------------------------

    def __str__(self):
        parts = []
        for coef, unit in zip(self.coefficients(), ("", "i", "j", "k")):
            text = str(coef)
            if not parts:
                parts.append(f"{text} {unit}".strip())
            elif text.startswith("-"):
                parts.append(f"- {text[1:]} {unit}".strip())
            else:
                parts.append(f"+ {text} {unit}".strip())
        return " ".join(parts)

    def __repr__(self):
        return f"SplitQuaternion({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    @classmethod
    def parse(cls, text: str) -> "SplitQuaternion":
        """Parse 'a + b i + c j + d k' with rational coefficients 'p/q'.

        Terms may be omitted or reordered; repeated units accumulate.
        """
        coeffs = {"": Fraction(0), "i": Fraction(0), "j": Fraction(0), "k": Fraction(0)}
        cleaned = text.replace("*", " ").strip()
        if not cleaned:
            raise ValueError("empty split-quaternion literal")
        term_re = re.compile(
            r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*([ijk])?|([ijk]))\s*")
        pos = 0
        seen = False
        while pos < len(cleaned):
            m = term_re.match(cleaned, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text!r} at {cleaned[pos:]!r}")
            sign, number, unit, bare = m.groups()
            value = Fraction(number) if number is not None else Fraction(1)
            if sign == "-":
                value = -value
            coeffs[unit or bare or ""] += value
            pos = m.end()
            seen = True
        if not seen:
            raise ValueError(f"cannot parse {text!r}")
        return cls(coeffs[""], coeffs["i"], coeffs["j"], coeffs["k"])


ONE = SplitQuaternion(1)
I = SplitQuaternion(0, 1)
J = SplitQuaternion(0, 0, 1)
K = SplitQuaternion(0, 0, 0, 1)
UNITS = (ONE, I, J, K)
IMAGINARY_UNITS = (I, J, K)


def _coerce(x):
    if isinstance(x, SplitQuaternion):
        return x
    if isinstance(x, (int, float, Fraction)):
        return SplitQuaternion(x)
    return None


def mul(q: SplitQuaternion, qp: SplitQuaternion) -> SplitQuaternion:
    return q * qp


def scalar_product(q: SplitQuaternion, qp: SplitQuaternion):
    """Re(q conj(q')) = a a' + b b' - c c' - d d'."""
    return q.a * qp.a + q.b * qp.b - q.c * qp.c - q.d * qp.d


def conj_norm(q: SplitQuaternion, qp: SplitQuaternion):
    """(conj(q), |q|^2, <q, q'>) in one call."""
    return q.conj(), q.square_norm(), scalar_product(q, qp)


def inverse(q: SplitQuaternion, field: ScalarField | None = None) -> SplitQuaternion:
    return q.inverse(field)


def unit_flow(axis: str, t: float) -> SplitQuaternion:
    """One-parameter unit subgroup: cos t + i sin t, or cosh t + j sinh t.

    Axis 'i' stays on the definite circle, axis 'j' on the hyperbola;
    both have square norm exactly 1 in exact arithmetic at rational
    points of those curves (see circle_point / hyperbola_point).
    """
    if axis == "i":
        return SplitQuaternion(math.cos(t), math.sin(t), 0, 0)
    if axis == "j":
        return SplitQuaternion(math.cosh(t), 0, math.sinh(t), 0)
    raise ValueError("axis must be 'i' or 'j'")


def circle_point(t: Fraction | int) -> SplitQuaternion:
    """Rational point cos + i sin of the unit circle, parametrised by
    the tangent half-angle: ((1-t^2) + 2t i) / (1+t^2)."""
    t = Fraction(t)
    den = 1 + t * t
    return SplitQuaternion((1 - t * t) / den, 2 * t / den, 0, 0)


def hyperbola_point(t: Fraction | int) -> SplitQuaternion:
    """Rational point cosh + j sinh of the unit hyperbola: t -> ((1+t^2) + 2t j)/(1-t^2)."""
    t = Fraction(t)
    den = 1 - t * t
    if den == 0:
        raise ValueError("parameter on the asymptote")
    return SplitQuaternion((1 + t * t) / den, 0, 2 * t / den, 0)


def exp_j(cosh_val, sinh_val) -> SplitQuaternion:
    """cosh + j sinh from explicitly supplied coordinates (exact tests
    feed rational pairs like (5/4, 3/4))."""
    return SplitQuaternion(cosh_val, 0, sinh_val, 0)
