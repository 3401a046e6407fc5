"""Exact coefficient arithmetic.

Coefficients are sparse multivariate polynomials over Q in named formal
parameters (central charge ``c``, level ``k``, ...).  Everything is exact and
immutable; equality is structural equality of canonical forms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction
RationalLike = Union[int, Fraction]

# A monomial is a tuple of (parameter name, positive exponent) pairs, sorted
# lexicographically by name.  The empty tuple is the constant monomial.
Monomial = tuple


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an integer or Fraction, got {type(x).__name__}")


class Scalar:
    """A polynomial in named parameters with rational coefficients.

    Monomials are kept in a canonical sorted form so that equal scalars have
    identical representations.  Zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if coeff:
                    clean[tuple(sorted(mono))] = coeff
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Scalar":
        return cls()

    @classmethod
    def one(cls) -> "Scalar":
        return cls({(): Fraction(1)})

    @classmethod
    def from_rational(cls, q: RationalLike) -> "Scalar":
        return cls({(): _as_fraction(q)})

    @classmethod
    def param(cls, name: str) -> "Scalar":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, x: "ScalarLike") -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return cls.from_rational(x)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def as_rational(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"scalar {self} is not a rational constant")
        return self._terms[()]

    def parameters(self) -> set:
        names = set()
        for mono in self._terms:
            for name, _ in mono:
                names.add(name)
        return names

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    def terms(self) -> Iterable[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items())

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = Scalar.coerce(other)
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            new = out.get(mono, Fraction(0)) + coeff
            if new:
                out[mono] = new
            else:
                out.pop(mono, None)
        result = Scalar.__new__(Scalar)
        result._terms = out
        return result

    __radd__ = __add__

    def __neg__(self):
        result = Scalar.__new__(Scalar)
        result._terms = {m: -c for m, c in self._terms.items()}
        return result

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if not q:
                return Scalar.zero()
            result = Scalar.__new__(Scalar)
            result._terms = {m: c * q for m, c in self._terms.items()}
            return result
        if not isinstance(other, Scalar):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _merge_monomials(m1, m2)
                new = out.get(mono, Fraction(0)) + c1 * c2
                if new:
                    out[mono] = new
                else:
                    out.pop(mono, None)
        result = Scalar.__new__(Scalar)
        result._terms = out
        return result

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if not q:
                raise ZeroDivisionError("scalar division by zero")
            return self * (Fraction(1) / q)
        if isinstance(other, Scalar) and other.is_constant():
            return self / other.as_rational()
        raise TypeError("scalars divide only by nonzero rational constants")

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of scalars are not defined")
        acc = Scalar.one()
        for _ in range(n):
            acc = acc * self
        return acc

    # Module protocol used by polynomial containers.
    def add(self, other: "Scalar") -> "Scalar":
        return self + other

    def scale(self, factor) -> "Scalar":
        return self * factor

    def substitute(self, values: Mapping[str, "ScalarLike"]) -> "Scalar":
        """Replace parameters by scalars; unlisted parameters are kept."""
        out = Scalar.zero()
        for mono, coeff in self._terms.items():
            term = Scalar.from_rational(coeff)
            for name, exp in mono:
                if name in values:
                    term = term * (Scalar.coerce(values[name]) ** exp)
                else:
                    term = term * (Scalar.param(name) ** exp)
            out = out + term
        return out

    # -- equality / hashing / display --------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self):
        if not self._terms:
            return "0"
        chunks = []
        for mono, coeff in sorted(self._terms.items()):
            body = "*".join(
                name if exp == 1 else f"{name}^{exp}" for name, exp in mono
            )
            if not body:
                text = str(abs(coeff))
            elif abs(coeff) == 1:
                text = body
            else:
                text = f"{abs(coeff)}*{body}"
            sign = "-" if coeff < 0 else "+"
            chunks.append((sign, text))
        first_sign, first = chunks[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in chunks[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"Scalar({self})"


ScalarLike = Union[int, Fraction, Scalar]

ZERO = Scalar.zero()
ONE = Scalar.one()


def _merge_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    exps: dict = {}
    for name, exp in m1:
        exps[name] = exps.get(name, 0) + exp
    for name, exp in m2:
        exps[name] = exps.get(name, 0) + exp
    return tuple(sorted((n, e) for n, e in exps.items() if e))


def binom(j, n: int):
    """Extended binomial coefficient prod_{k=1..n} (j-k+1)/k, with value 1 at n=0.

    The upper argument may be any integer, Fraction, or Scalar (for symbolic
    mode indices); the lower argument must be a non-negative integer.  Returns
    a Fraction for numeric input and a Scalar for symbolic input.
    """
    if not isinstance(n, int):
        raise ValueError(f"lower binomial argument must be an integer, got {n!r}")
    if n < 0:
        raise ValueError(f"lower binomial argument must be non-negative, got {n}")
    if isinstance(j, Scalar):
        if j.is_constant():
            return binom(j.as_rational(), n)
        acc = Scalar.one()
        for k in range(1, n + 1):
            acc = acc * (j - Scalar.from_rational(k - 1)) / k
        return acc
    q = _as_fraction(j)
    acc = Fraction(1)
    for k in range(1, n + 1):
        acc *= (q - k + 1) / k
    return acc


def factorial(n: int) -> int:
    acc = 1
    for k in range(2, n + 1):
        acc *= k
    return acc
