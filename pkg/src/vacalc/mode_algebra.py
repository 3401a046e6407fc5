"""Fourier-mode view of a conformal algebra presentation.

Modes are linear symbols ``g_(n)`` (shifted indexing) or ``g_n`` (weight
indexing, requiring declared weights); commutators expand through the
pairwise formula ``[a_(m), b_(n)] = sum_j C(m, j) (a_(j) b)_(m+n-j)`` and the
normalization rules ``(d^k g)_(n) = (-1)^k C(n,k) k! g_(n-k)`` and
``C_(n) = delta_(n,-1) C``.

Indices are scalars, so they may be symbolic polynomials in named parameters;
a Kronecker delta on a symbolic index that is not identically zero is treated
as vanishing (the generic-index regime).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lie_conformal import (
    AlgebraPresentation,
    CheckReport,
    ConformalElement,
    VacalcError,
    j_products,
)
from .scalar import Scalar, ScalarLike, binom, factorial

SHIFTED = "shifted"
WEIGHT = "weight"


@dataclass(frozen=True)
class ModeSymbol:
    gen: str
    index: Scalar
    indexing: str = SHIFTED

    def __str__(self):
        text = str(self.index).replace(" ", "")
        if self.indexing == SHIFTED:
            return f"{self.gen}_({text})"
        return f"{self.gen}_{{{text}}}" if len(text) > 1 else f"{self.gen}_{text}"


def mode(gen: str, index: ScalarLike, indexing: str = SHIFTED) -> ModeSymbol:
    return ModeSymbol(gen, Scalar.coerce(index), indexing)


class ModeExpression:
    """Finite linear combination of mode symbols plus central scalars."""

    __slots__ = ("terms", "central")

    def __init__(self, terms=None, central=None):
        clean = {}
        if terms:
            for sym, value in dict(terms).items():
                value = Scalar.coerce(value)
                if not value.is_zero():
                    clean[sym] = value
        cent = {}
        if central:
            for cid, value in dict(central).items():
                value = Scalar.coerce(value)
                if not value.is_zero():
                    cent[cid] = value
        self.terms = clean
        self.central = cent

    @classmethod
    def zero(cls) -> "ModeExpression":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms and not self.central

    def add(self, other: "ModeExpression") -> "ModeExpression":
        terms = dict(self.terms)
        for sym, value in other.terms.items():
            new = terms.get(sym, Scalar.zero()) + value
            if new.is_zero():
                terms.pop(sym, None)
            else:
                terms[sym] = new
        central = dict(self.central)
        for cid, value in other.central.items():
            new = central.get(cid, Scalar.zero()) + value
            if new.is_zero():
                central.pop(cid, None)
            else:
                central[cid] = new
        out = ModeExpression.__new__(ModeExpression)
        out.terms = terms
        out.central = central
        return out

    def scale(self, factor: ScalarLike) -> "ModeExpression":
        factor = Scalar.coerce(factor)
        out = ModeExpression.__new__(ModeExpression)
        out.terms = {
            s: v for s, v in ((s, v * factor) for s, v in self.terms.items())
            if not v.is_zero()
        }
        out.central = {
            c: v for c, v in ((c, v * factor) for c, v in self.central.items())
            if not v.is_zero()
        }
        return out

    def neg(self) -> "ModeExpression":
        return self.scale(-1)

    def sub(self, other: "ModeExpression") -> "ModeExpression":
        return self.add(other.neg())

    def __eq__(self, other):
        if not isinstance(other, ModeExpression):
            return NotImplemented
        return self.terms == other.terms and self.central == other.central

    def __str__(self):
        parts = []
        for sym in sorted(self.terms, key=lambda s: (s.gen, str(s.index))):
            value = self.terms[sym]
            text = str(value)
            if text == "1":
                parts.append(str(sym))
            elif text == "-1":
                parts.append(f"-{sym}")
            elif "+" in text or " - " in text:
                parts.append(f"({text})*{sym}")
            else:
                parts.append(f"{text}*{sym}")
        for cid in sorted(self.central):
            value = self.central[cid]
            text = str(value)
            if text == "1":
                parts.append(cid)
            elif "+" in text or " - " in text:
                parts.append(f"({text})*{cid}")
            else:
                parts.append(f"{text}*{cid}")
        if not parts:
            return "0"
        out = parts[0]
        for part in parts[1:]:
            out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return out

    __repr__ = __str__


def _kron_delta(x: Scalar) -> Fraction:
    """Kronecker delta of an exact index expression.

    Identically zero gives 1.  Any other polynomial gives 0: for constants
    this is exact; for symbolic indices it is the generic-index value (the
    coincident case is recovered by substituting the slice explicitly).
    """
    return Fraction(1) if x.is_zero() else Fraction(0)


def _check_weight_index(alg: AlgebraPresentation, gen: str, index: Scalar):
    delta = alg.weight(gen)
    if delta is None:
        raise VacalcError(
            f"weight indexing needs a declared weight for {gen!r}"
        )
    if index.is_constant():
        if (index.as_rational() + delta) % 1 != 0:
            raise VacalcError(
                f"index {index} of {gen!r} is incompatible with weight {delta}: "
                "index + weight must be an integer"
            )


def normalize_derivative_mode(
    gen: str, k: int, n: ScalarLike, alg: AlgebraPresentation | None = None
) -> ModeExpression:
    """``(d^k g)_(n) = (-1)^k C(n, k) k! g_(n-k)`` in shifted indexing.

    For a torsion central the derivative kills every mode (k >= 1), and at
    k = 0 only the (-1)-mode survives.
    """
    if k < 0:
        raise ValueError("derivative power must be non-negative")
    n = Scalar.coerce(n)
    if alg is not None and alg.is_central(gen):
        if k > 0:
            return ModeExpression.zero()
        return ModeExpression(central={gen: _kron_delta(n + Scalar.from_rational(1))})
    coeff = binom(n, k) * Fraction(-1) ** k * factorial(k)
    return ModeExpression(terms={ModeSymbol(gen, n - Scalar.from_rational(k)): coeff})


def _element_mode(
    e: ConformalElement, p: Scalar, alg: AlgebraPresentation, indexing: str
) -> ModeExpression:
    """Mode ``e_(p)`` (shifted index p) of an element, normalized and
    optionally converted to weight indexing."""
    out = ModeExpression.zero()
    for (g, k), coeff in e.terms.items():
        out = out.add(normalize_derivative_mode(g, k, p, alg).scale(coeff))
    for cid, coeff in e.central.items():
        out = out.add(
            ModeExpression(
                central={cid: coeff * _kron_delta(p + Scalar.from_rational(1))}
            )
        )
    if indexing == WEIGHT:
        converted = ModeExpression.zero()
        for sym, value in out.terms.items():
            delta = alg.weight(sym.gen)
            if delta is None:
                raise VacalcError(
                    f"weight indexing needs a declared weight for {sym.gen!r}"
                )
            widx = sym.index - Scalar.from_rational(delta) + Scalar.from_rational(1)
            converted = converted.add(
                ModeExpression(terms={ModeSymbol(sym.gen, widx, WEIGHT): value})
            )
        converted = converted.add(ModeExpression(central=out.central))
        out = converted
    return out


def mode_commutator(
    a: str,
    m: ScalarLike,
    b: str,
    n: ScalarLike,
    alg: AlgebraPresentation,
    indexing: str = SHIFTED,
) -> ModeExpression:
    """``[a_(m), b_(n)] = sum_j C(m, j) (a_(j) b)_(m+n-j)``.

    With weight indexing the inputs are weight indices (``a_m = a_(m+D-1)``)
    and the output is converted back; the graded commutator is the super
    version when both generators are odd.
    """
    if indexing not in (SHIFTED, WEIGHT):
        raise VacalcError(f"unknown indexing {indexing!r}")
    m = Scalar.coerce(m)
    n = Scalar.coerce(n)
    if alg.is_central(a) or alg.is_central(b):
        return ModeExpression.zero()
    if indexing == WEIGHT:
        _check_weight_index(alg, a, m)
        _check_weight_index(alg, b, n)
        ms = m + Scalar.from_rational(alg.weight(a) - 1)
        ns = n + Scalar.from_rational(alg.weight(b) - 1)
    else:
        ms, ns = m, n
    out = ModeExpression.zero()
    for j, cj in j_products(alg.gen(a), alg.gen(b), alg):
        coeff = binom(ms, j)
        if isinstance(coeff, Scalar):
            if coeff.is_zero():
                continue
        elif not coeff:
            continue
        p = ms + ns - Scalar.from_rational(j)
        out = out.add(_element_mode(cj, p, alg, indexing).scale(coeff))
    return out


def commute(a: ModeSymbol, b: ModeSymbol, alg: AlgebraPresentation) -> ModeExpression:
    if a.indexing != b.indexing:
        raise VacalcError(
            f"indexing mismatch: {a} is {a.indexing}, {b} is {b.indexing}"
        )
    return mode_commutator(a.gen, a.index, b.gen, b.index, alg, a.indexing)


def _expr_commutator(
    x: ModeExpression, y: ModeExpression, alg: AlgebraPresentation
) -> ModeExpression:
    """Bilinear extension of the mode commutator; centrals commute."""
    out = ModeExpression.zero()
    for sa, va in x.terms.items():
        for sb, vb in y.terms.items():
            out = out.add(commute(sa, sb, alg).scale(va * vb))
    return out


def _index_grid(alg: AlgebraPresentation, gen: str, bound: int, indexing: str):
    """Indices in [-bound, bound]: integers when shifted; for weight indexing
    the grid is offset so that index + weight is integral."""
    if indexing == SHIFTED:
        return [Fraction(k) for k in range(-bound, bound + 1)]
    offset = (-alg.weight(gen)) % 1
    values = []
    v = Fraction(-bound) + offset
    while v <= bound:
        values.append(v)
        v += 1
    return values


@dataclass
class ModeFailure:
    kind: str
    subject: tuple
    diff: ModeExpression

    def __str__(self):
        where = ", ".join(str(s) for s in self.subject)
        return f"{self.kind} at ({where}): {self.diff}"


def verify_mode_jacobi(
    alg: AlgebraPresentation, index_range: int, indexing: str | None = None
) -> CheckReport:
    """Graded antisymmetry and Jacobi for all generator triples with indices
    in [-range, range] (on each generator's own integral or half-integral
    grid when weight-indexed)."""
    if index_range < 1:
        raise ValueError("index range must be at least 1")
    if indexing is None:
        weights = [g.weight for g in alg.generators]
        indexing = WEIGHT if all(w is not None for w in weights) else SHIFTED
    gens = [g.name for g in alg.generators]
    grids = {g: _index_grid(alg, g, index_range, indexing) for g in gens}
    failures = []
    checked = 0
    pair_cache: dict = {}

    def comm(ga, i, gb, j):
        key = (ga, i, gb, j)
        if key not in pair_cache:
            pair_cache[key] = mode_commutator(ga, i, gb, j, alg, indexing)
        return pair_cache[key]

    for a in gens:
        for b in gens:
            sign_ab = alg.sign(alg.parity(a), alg.parity(b))
            for i in grids[a]:
                for j in grids[b]:
                    lhs = comm(a, i, b, j)
                    rhs = comm(b, j, a, i).scale(-sign_ab)
                    checked += 1
                    diff = lhs.sub(rhs)
                    if not diff.is_zero():
                        failures.append(
                            ModeFailure("antisymmetry", (f"{a}_{i}", f"{b}_{j}"), diff)
                        )
    for a in gens:
        for b in gens:
            sign_ab = alg.sign(alg.parity(a), alg.parity(b))
            for c in gens:
                for i in grids[a]:
                    for j in grids[b]:
                        for k in grids[c]:
                            inner_bc = comm(b, j, c, k)
                            lhs = _expr_commutator(
                                ModeExpression(
                                    terms={mode(a, i, indexing): 1}
                                ),
                                inner_bc,
                                alg,
                            )
                            inner_ab = comm(a, i, b, j)
                            first = _expr_commutator(
                                inner_ab,
                                ModeExpression(terms={mode(c, k, indexing): 1}),
                                alg,
                            )
                            inner_ac = comm(a, i, c, k)
                            second = _expr_commutator(
                                ModeExpression(terms={mode(b, j, indexing): 1}),
                                inner_ac,
                                alg,
                            ).scale(sign_ab)
                            checked += 1
                            diff = lhs.sub(first).sub(second)
                            if not diff.is_zero():
                                failures.append(
                                    ModeFailure(
                                        "jacobi",
                                        (f"{a}_{i}", f"{b}_{j}", f"{c}_{k}"),
                                        diff,
                                    )
                                )
    return CheckReport("mode-jacobi", alg.name, checked, failures)
