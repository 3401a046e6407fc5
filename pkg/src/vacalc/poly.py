"""Polynomials in formal bracket variables (lambda, mu, ...).

A :class:`BracketPoly` stores, for each exponent vector, a coefficient living
in an additive module: a :class:`~vacalc.scalar.Scalar`, a one-variable
Laurent polynomial, an element of a C[d]-module presentation, or a vertex
element.  Coefficients must provide ``add``, ``scale`` and ``is_zero``;
substitution of ``lambda -> -lambda - d`` additionally needs ``translate``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from .scalar import ScalarLike, binom


class BracketPoly:
    __slots__ = ("variables", "coeffs")

    def __init__(self, variables, coeffs=None):
        self.variables = tuple(variables)
        clean = {}
        if coeffs:
            for exps, value in coeffs.items():
                exps = tuple(exps)
                if len(exps) != len(self.variables):
                    raise ValueError("exponent arity does not match variables")
                if any(e < 0 for e in exps):
                    raise ValueError("negative bracket-variable exponent")
                if not value.is_zero():
                    clean[exps] = value
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, variables=("lambda",)) -> "BracketPoly":
        return cls(variables)

    @classmethod
    def constant(cls, value, variables=("lambda",)) -> "BracketPoly":
        return cls(variables, {(0,) * len(variables): value})

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exps, zero):
        """Coefficient at the exponent vector, or ``zero`` when absent."""
        return self.coeffs.get(tuple(exps), zero)

    def degree(self, var: str) -> int:
        """Largest exponent of ``var`` present; -1 for the zero polynomial."""
        idx = self.variables.index(var)
        if not self.coeffs:
            return -1
        return max(e[idx] for e in self.coeffs)

    def terms(self) -> Iterable:
        return sorted(self.coeffs.items())

    # -- module operations -----------------------------------------------------

    def add(self, other: "BracketPoly") -> "BracketPoly":
        if self.variables != other.variables:
            raise ValueError("cannot add polynomials in different variables")
        out = dict(self.coeffs)
        for exps, value in other.coeffs.items():
            if exps in out:
                merged = out[exps].add(value)
                if merged.is_zero():
                    del out[exps]
                else:
                    out[exps] = merged
            else:
                out[exps] = value
        result = BracketPoly.__new__(BracketPoly)
        result.variables = self.variables
        result.coeffs = out
        return result

    def neg(self) -> "BracketPoly":
        return self.scale(-1)

    def sub(self, other: "BracketPoly") -> "BracketPoly":
        return self.add(other.neg())

    def scale(self, factor: ScalarLike) -> "BracketPoly":
        out = {}
        for exps, value in self.coeffs.items():
            scaled = value.scale(factor)
            if not scaled.is_zero():
                out[exps] = scaled
        result = BracketPoly.__new__(BracketPoly)
        result.variables = self.variables
        result.coeffs = out
        return result

    def map_coeffs(self, fn: Callable) -> "BracketPoly":
        out = {}
        for exps, value in self.coeffs.items():
            mapped = fn(value)
            if not mapped.is_zero():
                out[exps] = mapped
        result = BracketPoly.__new__(BracketPoly)
        result.variables = self.variables
        result.coeffs = out
        return result

    def shift_power(self, var: str, k: int) -> "BracketPoly":
        """Multiply by ``var**k``."""
        idx = self.variables.index(var)
        out = {}
        for exps, value in self.coeffs.items():
            new = list(exps)
            new[idx] += k
            out[tuple(new)] = value
        result = BracketPoly.__new__(BracketPoly)
        result.variables = self.variables
        result.coeffs = out
        return result

    def __eq__(self, other):
        if not isinstance(other, BracketPoly):
            return NotImplemented
        return self.variables == other.variables and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.variables, frozenset(self.coeffs.items())))

    def __repr__(self):
        body = ", ".join(f"{e}: {v}" for e, v in self.terms())
        return f"BracketPoly[{','.join(self.variables)}]({body})"


def substitute_skew(poly: BracketPoly) -> BracketPoly:
    """Substitute ``lambda -> -lambda - d`` in a one-variable polynomial.

    ``d`` acts on the coefficients through their ``translate`` method (raising
    derivative powers and annihilating torsion generators), so
    ``lambda**k . e`` becomes ``sum_i C(k,i) (-1)**k lambda**i d**(k-i) e``.
    """
    if len(poly.variables) != 1:
        raise ValueError("skew substitution needs a single bracket variable")
    var = poly.variables[0]
    out = BracketPoly.zero((var,))
    for (k,), value in poly.coeffs.items():
        shifted = value
        # i = k, k-1, ..., 0; apply one more translate per step down.
        for i in range(k, -1, -1):
            if i < k:
                shifted = shifted.translate()
            coeff = binom(k, i) * (1 if k % 2 == 0 else -1)
            term = shifted.scale(coeff)
            if not term.is_zero():
                out = out.add(BracketPoly((var,), {(i,): term}))
    return out


def integrate_zero_to_lambda(poly: BracketPoly, var_out: str = "lambda") -> BracketPoly:
    """Formal integral from 0 to ``var_out`` of a one-variable polynomial:
    each monomial ``u**k`` maps to ``var_out**(k+1) / (k+1)``."""
    if len(poly.variables) != 1:
        raise ValueError("formal integration needs a single bracket variable")
    out = BracketPoly.zero((var_out,))
    for (k,), value in poly.coeffs.items():
        out = out.add(
            BracketPoly((var_out,), {(k + 1,): value.scale(Fraction(1, k + 1))})
        )
    return out


def substitute_sum(poly: BracketPoly, variables=("lambda", "mu")) -> BracketPoly:
    """Substitute ``nu -> lambda + mu``: a one-variable polynomial becomes a
    two-variable polynomial via the binomial expansion of ``(lambda+mu)**k``."""
    if len(poly.variables) != 1:
        raise ValueError("sum substitution needs a single bracket variable")
    out = BracketPoly.zero(variables)
    for (k,), value in poly.coeffs.items():
        for i in range(k + 1):
            term = value.scale(binom(k, i))
            out = out.add(BracketPoly(variables, {(i, k - i): term}))
    return out


def embed_bivariate(
    poly: BracketPoly, position: int, other_power: int, variables=("lambda", "mu")
) -> BracketPoly:
    """Embed a one-variable polynomial into two variables, placing its own
    variable at ``position`` (0 or 1) and a fixed power of the other variable."""
    out = BracketPoly.zero(variables)
    for (k,), value in poly.coeffs.items():
        exps = [0, 0]
        exps[position] = k
        exps[1 - position] = other_power
        out = out.add(BracketPoly(variables, {tuple(exps): value}))
    return out
