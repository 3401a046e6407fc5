"""Presentations of Lie conformal superalgebras and the lambda-bracket.

A presentation declares parity-graded generators, torsion central generators,
and a bracket table on ordered generator pairs.  The bracket of arbitrary
elements of the free C[d]-module is evaluated by sesquilinearity, with the
mirror of each table entry derived through skew-symmetry, so the table can
never hold two inconsistent copies of the same pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .poly import BracketPoly, embed_bivariate, substitute_skew, substitute_sum
from .scalar import Scalar, ScalarLike, binom, factorial


class VacalcError(Exception):
    pass


class ParityError(VacalcError):
    pass


class UndeclaredSymbolError(VacalcError):
    pass


class PresentationError(VacalcError):
    pass


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    def __add__(self, other: "Parity") -> "Parity":
        return Parity((self.value + other.value) % 2)

    def sign_with(self, other: "Parity") -> int:
        """The Koszul sign p(a, b): -1 iff both arguments are odd."""
        return -1 if self is Parity.ODD and other is Parity.ODD else 1

    def __str__(self):
        return "even" if self is Parity.EVEN else "odd"


# ---------------------------------------------------------------------------
# Elements of the free C[d]-module over a presentation
# ---------------------------------------------------------------------------


class ConformalElement:
    """Finite sum of ``scalar * d^n(generator)`` plus central multiples."""

    __slots__ = ("terms", "central")

    def __init__(self, terms=None, central=None):
        clean_terms = {}
        if terms:
            for (gen, dpow), value in dict(terms).items():
                value = Scalar.coerce(value)
                if dpow < 0:
                    raise ValueError("derivative powers must be non-negative")
                if not value.is_zero():
                    clean_terms[(gen, int(dpow))] = value
        clean_central = {}
        if central:
            for cid, value in dict(central).items():
                value = Scalar.coerce(value)
                if not value.is_zero():
                    clean_central[cid] = value
        self.terms = clean_terms
        self.central = clean_central

    @classmethod
    def zero(cls) -> "ConformalElement":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms and not self.central

    def add(self, other: "ConformalElement") -> "ConformalElement":
        terms = dict(self.terms)
        for key, value in other.terms.items():
            new = terms.get(key, Scalar.zero()) + value
            if new.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = new
        central = dict(self.central)
        for key, value in other.central.items():
            new = central.get(key, Scalar.zero()) + value
            if new.is_zero():
                central.pop(key, None)
            else:
                central[key] = new
        out = ConformalElement.__new__(ConformalElement)
        out.terms = terms
        out.central = central
        return out

    def neg(self) -> "ConformalElement":
        return self.scale(-1)

    def sub(self, other: "ConformalElement") -> "ConformalElement":
        return self.add(other.neg())

    def scale(self, factor: ScalarLike) -> "ConformalElement":
        factor = Scalar.coerce(factor)
        out = ConformalElement.__new__(ConformalElement)
        out.terms = {
            k: v for k, v in ((k, v * factor) for k, v in self.terms.items())
            if not v.is_zero()
        }
        out.central = {
            k: v for k, v in ((k, v * factor) for k, v in self.central.items())
            if not v.is_zero()
        }
        return out

    def translate(self) -> "ConformalElement":
        """Apply d: raise derivative powers; centrals are torsion (d C = 0)."""
        out = ConformalElement.__new__(ConformalElement)
        out.terms = {(g, n + 1): v for (g, n), v in self.terms.items()}
        out.central = {}
        return out

    def translate_power(self, k: int) -> "ConformalElement":
        out = self
        for _ in range(k):
            out = out.translate()
        return out

    def __eq__(self, other):
        if not isinstance(other, ConformalElement):
            return NotImplemented
        return self.terms == other.terms and self.central == other.central

    def __hash__(self):
        return hash(
            (frozenset(self.terms.items()), frozenset(self.central.items()))
        )

    def __str__(self):
        parts = []
        for (gen, dpow) in sorted(self.terms):
            value = self.terms[(gen, dpow)]
            if dpow == 0:
                head = gen
            elif dpow == 1:
                head = f"d({gen})"
            else:
                head = f"d^{dpow}({gen})"
            parts.append(_scaled(head, value))
        for cid in sorted(self.central):
            parts.append(_scaled(cid, self.central[cid]))
        return _join(parts)

    __repr__ = __str__


def _scaled(head: str, value: Scalar) -> str:
    text = str(value)
    if text == "1":
        return head
    if text == "-1":
        return f"-{head}"
    if "+" in text or (text.count("-") > (1 if text.startswith("-") else 0)):
        return f"({text})*{head}"
    return f"{text}*{head}"


def _join(parts) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += f" - {part[1:]}"
        else:
            out += f" + {part}"
    return out


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    parity: Parity = Parity.EVEN
    weight: Fraction | None = None


@dataclass(frozen=True)
class CentralDecl:
    name: str
    parity: Parity = Parity.EVEN
    acts_as: Scalar | None = None  # vertex-layer value; None keeps it symbolic


class AlgebraPresentation:
    """Validated presentation of a Lie conformal superalgebra.

    ``table`` holds the bracket of each ordered generator pair (i <= j in
    declaration order) as a polynomial in ``lambda`` with element-valued
    coefficients; mirrors are always derived via skew-symmetry.
    """

    def __init__(
        self,
        name: str,
        parameters: Iterable[str] = (),
        generators: Iterable[GeneratorDecl] = (),
        centrals: Iterable[CentralDecl] = (),
        table: Mapping | None = None,
    ):
        self.name = name
        self.parameters = tuple(parameters)
        self.generators = tuple(generators)
        self.centrals = tuple(centrals)
        self._gen_index = {g.name: i for i, g in enumerate(self.generators)}
        self._central_index = {c.name: i for i, c in enumerate(self.centrals)}
        if len(self._gen_index) != len(self.generators):
            raise PresentationError("duplicate generator names")
        overlap = set(self._gen_index) & set(self._central_index)
        if overlap or len(self._central_index) != len(self.centrals):
            raise PresentationError("duplicate or clashing central names")
        self.table = {}
        for (a, b), poly in dict(table or {}).items():
            self._check_pair(a, b)
            if not poly.is_zero():
                self.table[(a, b)] = poly
        self._validate_table()

    # -- declaration lookups -------------------------------------------------

    def is_generator(self, name: str) -> bool:
        return name in self._gen_index

    def is_central(self, name: str) -> bool:
        return name in self._central_index

    def index(self, name: str) -> int:
        try:
            return self._gen_index[name]
        except KeyError:
            raise UndeclaredSymbolError(f"undeclared generator {name!r}") from None

    def parity(self, name: str) -> Parity:
        if name in self._gen_index:
            return self.generators[self._gen_index[name]].parity
        if name in self._central_index:
            return self.centrals[self._central_index[name]].parity
        raise UndeclaredSymbolError(f"undeclared symbol {name!r}")

    def weight(self, name: str) -> Fraction | None:
        if name in self._gen_index:
            return self.generators[self._gen_index[name]].weight
        if name in self._central_index:
            return Fraction(0)
        raise UndeclaredSymbolError(f"undeclared symbol {name!r}")

    def weight_table(self) -> dict:
        return {
            g.name: g.weight for g in self.generators if g.weight is not None
        }

    def acts_as(self, name: str) -> Scalar | None:
        return self.centrals[self._central_index[name]].acts_as

    # -- element constructors --------------------------------------------------

    def gen(self, name: str, dpow: int = 0) -> ConformalElement:
        if self.is_generator(name):
            return ConformalElement(terms={(name, dpow): Scalar.one()})
        if self.is_central(name):
            if dpow > 0:
                return ConformalElement.zero()
            return ConformalElement(central={name: Scalar.one()})
        raise UndeclaredSymbolError(f"undeclared symbol {name!r}")

    def zero_element(self) -> ConformalElement:
        return ConformalElement.zero()

    def element_parity(self, x: ConformalElement) -> Parity:
        """Parity of a homogeneous element; mixed parity is rejected."""
        parities = {self.parity(g) for (g, _) in x.terms}
        parities |= {self.parity(c) for c in x.central}
        if len(parities) > 1:
            raise ParityError(f"element {x} mixes parities")
        return parities.pop() if parities else Parity.EVEN

    def sign(self, pa: Parity, pb: Parity) -> int:
        return pa.sign_with(pb)

    # -- validation -------------------------------------------------------------

    def _check_pair(self, a: str, b: str):
        for name in (a, b):
            if not self.is_generator(name):
                if self.is_central(name):
                    raise PresentationError(
                        f"central {name!r} cannot carry a table entry"
                    )
                raise UndeclaredSymbolError(f"undeclared generator {name!r}")
        if self.index(a) > self.index(b):
            raise PresentationError(
                f"table pair ({a},{b}) must be stored in declaration order"
            )

    def _check_element_symbols(self, x: ConformalElement, context: str):
        for (g, _) in x.terms:
            if not self.is_generator(g):
                raise UndeclaredSymbolError(
                    f"undeclared generator {g!r} in {context}"
                )
        for c in x.central:
            if not self.is_central(c):
                raise UndeclaredSymbolError(f"undeclared central {c!r} in {context}")

    def _validate_table(self):
        for (a, b), poly in self.table.items():
            expected = self.parity(a) + self.parity(b)
            for exps, element in poly.coeffs.items():
                self._check_element_symbols(element, f"bracket [{a},{b}]")
                if self.element_parity(element) is not expected and not element.is_zero():
                    raise PresentationError(
                        f"bracket [{a},{b}] coefficient {element} has parity "
                        f"inconsistent with p({a})+p({b})"
                    )

    def pair_bracket(self, a: str, b: str) -> BracketPoly:
        """Bracket of two declared symbols, deriving mirrors via skew-symmetry."""
        if self.is_central(a) or self.is_central(b):
            return BracketPoly.zero(("lambda",))
        if self.index(a) <= self.index(b):
            return self.table.get((a, b), BracketPoly.zero(("lambda",)))
        stored = self.table.get((b, a))
        if stored is None:
            return BracketPoly.zero(("lambda",))
        sign = -self.sign(self.parity(a), self.parity(b))
        return substitute_skew(stored).scale(sign)

    def __eq__(self, other):
        if not isinstance(other, AlgebraPresentation):
            return NotImplemented
        return (
            self.name == other.name
            and self.parameters == other.parameters
            and self.generators == other.generators
            and self.centrals == other.centrals
            and self.table == other.table
        )

    def __repr__(self):
        return f"AlgebraPresentation({self.name!r})"


# ---------------------------------------------------------------------------
# The lambda-bracket and its consequences
# ---------------------------------------------------------------------------


def lambda_bracket(
    x: ConformalElement, y: ConformalElement, alg: AlgebraPresentation
) -> BracketPoly:
    """Bilinear bracket evaluation.

    A derivative power m on the left contributes ``(-lambda)^m``; on the right
    it contributes the binomially expanded ``(d + lambda)^m`` acting on the
    table entry.  Both operands must be parity-homogeneous.
    """
    alg._check_element_symbols(x, "bracket operand")
    alg._check_element_symbols(y, "bracket operand")
    alg.element_parity(x)
    alg.element_parity(y)
    out = BracketPoly.zero(("lambda",))
    for (g, m), s in sorted(x.terms.items()):
        for (h, n), t in sorted(y.terms.items()):
            base = alg.pair_bracket(g, h)
            if base.is_zero():
                continue
            contribution = BracketPoly.zero(("lambda",))
            # (d + lambda)^n applied to the entry, then (-lambda)^m in front.
            for k in range(n + 1):
                part = base.map_coeffs(
                    lambda e, r=n - k: e.translate_power(r)
                ).scale(binom(n, k))
                contribution = contribution.add(part.shift_power("lambda", k))
            sign = Fraction(-1) ** m
            contribution = contribution.shift_power("lambda", m).scale(sign * s * t)
            out = out.add(contribution)
    return out


def j_products(
    x: ConformalElement, y: ConformalElement, alg: AlgebraPresentation
) -> list:
    """Nonzero products ``x_(j) y = j! * (lambda^j coefficient)``."""
    poly = lambda_bracket(x, y, alg)
    return [
        (j, value.scale(factorial(j)))
        for (j,), value in sorted(poly.coeffs.items())
    ]


# -- axiom checkers ----------------------------------------------------------


@dataclass
class CheckFailure:
    subject: tuple
    diff: BracketPoly

    def __str__(self):
        where = ",".join(str(s) for s in self.subject)
        parts = [
            f"lambda^{e[0] if len(e) == 1 else e}: {v}"
            for e, v in self.diff.terms()
        ]
        return f"[{where}]: " + "; ".join(parts)


@dataclass
class CheckReport:
    check: str
    algebra: str
    checked: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures

    def __str__(self):
        status = "ok" if self.passed else "FAIL"
        noun = "identity" if self.checked == 1 else "identities"
        head = f"check {self.check} on {self.algebra}: {status} ({self.checked} {noun})"
        lines = [head]
        for failure in self.failures:
            lines.append(f"  {failure}")
        return "\n".join(lines)


def check_skew(alg: AlgebraPresentation) -> CheckReport:
    """Verify ``[b_lambda a] = -p(a,b) * ([a_lambda b] with lambda -> -lambda-d)``
    for every generator pair."""
    failures = []
    checked = 0
    gens = [g.name for g in alg.generators]
    for i, a in enumerate(gens):
        for b in gens[i:]:
            xa, xb = alg.gen(a), alg.gen(b)
            lhs = lambda_bracket(xb, xa, alg)
            sign = -alg.sign(alg.parity(a), alg.parity(b))
            rhs = substitute_skew(lambda_bracket(xa, xb, alg)).scale(sign)
            diff = lhs.sub(rhs)
            checked += 1
            if not diff.is_zero():
                failures.append(CheckFailure((b, a), diff))
    return CheckReport("skew", alg.name, checked, failures)


def _nested_bracket(
    x: ConformalElement, inner: BracketPoly, alg, outer_pos: int
) -> BracketPoly:
    """``[x_lambda inner]`` where inner is a polynomial in the other variable;
    outer_pos selects which slot of (lambda, mu) the new bracket variable fills."""
    out = BracketPoly.zero(("lambda", "mu"))
    for (k,), coeff in inner.coeffs.items():
        b = lambda_bracket(x, coeff, alg)
        out = out.add(embed_bivariate(b, outer_pos, k))
    return out


def check_jacobi(alg: AlgebraPresentation) -> CheckReport:
    """Verify ``[a_l [b_m c]] = [[a_l b]_(l+m) c] + p(a,b) [b_m [a_l c]]``
    coefficientwise in (lambda, mu) for every generator triple."""
    failures = []
    checked = 0
    gens = [g.name for g in alg.generators]
    for a in gens:
        for b in gens:
            for c in gens:
                xa, xb, xc = alg.gen(a), alg.gen(b), alg.gen(c)
                lhs = _nested_bracket(xa, lambda_bracket(xb, xc, alg), alg, 0)
                middle = BracketPoly.zero(("lambda", "mu"))
                for (i,), coeff in lambda_bracket(xa, xb, alg).coeffs.items():
                    inner = lambda_bracket(coeff, xc, alg)
                    middle = middle.add(
                        substitute_sum(inner).shift_power("lambda", i)
                    )
                sign = alg.sign(alg.parity(a), alg.parity(b))
                third = _nested_bracket(xb, lambda_bracket(xa, xc, alg), alg, 1).scale(
                    sign
                )
                diff = lhs.sub(middle).sub(third)
                checked += 1
                if not diff.is_zero():
                    failures.append(CheckFailure((a, b, c), diff))
    return CheckReport("jacobi", alg.name, checked, failures)


def mode_commutator(a: str, m, b: str, n, alg: AlgebraPresentation, indexing="shifted"):
    """Commutator of Fourier modes; see :mod:`vacalc.mode_algebra`."""
    from . import mode_algebra

    return mode_algebra.mode_commutator(a, m, b, n, alg, indexing)


# ---------------------------------------------------------------------------
# Built-in presentations
# ---------------------------------------------------------------------------


def virasoro(central_charge: str = "c") -> AlgebraPresentation:
    """One even generator L of weight 2 with bracket (d + 2 lambda) L + lambda^3/12 C."""
    L = ConformalElement(terms={("L", 0): 1})
    dL = ConformalElement(terms={("L", 1): 1})
    C = ConformalElement(central={"C": Fraction(1, 12)})
    table = {
        ("L", "L"): BracketPoly(
            ("lambda",), {(0,): dL, (1,): L.scale(2), (3,): C}
        )
    }
    return AlgebraPresentation(
        name="virasoro",
        parameters=(central_charge,),
        generators=(GeneratorDecl("L", Parity.EVEN, Fraction(2)),),
        centrals=(CentralDecl("C", Parity.EVEN, Scalar.param(central_charge)),),
        table=table,
    )


def neveu_schwarz(central_charge: str = "c") -> AlgebraPresentation:
    """Virasoro plus an odd weight-3/2 generator G with [G_l G] = L + lambda^2/6 C."""
    L = ConformalElement(terms={("L", 0): 1})
    dL = ConformalElement(terms={("L", 1): 1})
    G = ConformalElement(terms={("G", 0): 1})
    dG = ConformalElement(terms={("G", 1): 1})
    table = {
        ("L", "L"): BracketPoly(
            ("lambda",),
            {(0,): dL, (1,): L.scale(2), (3,): ConformalElement(central={"C": Fraction(1, 12)})},
        ),
        ("L", "G"): BracketPoly(
            ("lambda",), {(0,): dG, (1,): G.scale(Fraction(3, 2))}
        ),
        ("G", "G"): BracketPoly(
            ("lambda",),
            {(0,): L, (2,): ConformalElement(central={"C": Fraction(1, 6)})},
        ),
    }
    return AlgebraPresentation(
        name="neveu_schwarz",
        parameters=(central_charge,),
        generators=(
            GeneratorDecl("L", Parity.EVEN, Fraction(2)),
            GeneratorDecl("G", Parity.ODD, Fraction(3, 2)),
        ),
        centrals=(CentralDecl("C", Parity.EVEN, Scalar.param(central_charge)),),
        table=table,
    )


def _check_form(basis, form, antisupersymmetric: bool):
    """Validate (anti)supersymmetry and parity support of a bilinear form."""
    names = [g.name for g in basis]
    parity = {g.name: g.parity for g in basis}
    for a in names:
        for b in names:
            val = form.get((a, b), Scalar.zero())
            val = Scalar.coerce(val)
            mirror = Scalar.coerce(form.get((b, a), Scalar.zero()))
            if parity[a] is not parity[b]:
                if not val.is_zero():
                    raise PresentationError(
                        f"form must vanish on mixed parities, got ({a},{b}) = {val}"
                    )
                continue
            sign = Fraction(-1) ** parity[a].value
            if antisupersymmetric:
                sign = -sign
            if val != mirror * sign:
                kind = "antisupersymmetric" if antisupersymmetric else "supersymmetric"
                raise PresentationError(
                    f"form is not {kind}: ({a},{b}) = {val} vs ({b},{a}) = {mirror}"
                )


def current_algebra(
    basis,
    brackets,
    form,
    name: str = "current",
    level: str = "k",
    central: str = "K",
    validate: bool = True,
) -> AlgebraPresentation:
    """Current algebra over a finite Lie superalgebra with invariant form:
    ``[a_l b] = [a, b] + (a|b) K lambda``.

    ``basis`` lists GeneratorDecl (weights default to 1); ``brackets`` maps
    ordered pairs (i <= j in basis order) to element coefficient dicts;
    ``form`` maps pairs to scalars (supersymmetric).
    """
    basis = tuple(
        GeneratorDecl(g.name, g.parity, g.weight if g.weight is not None else Fraction(1))
        for g in basis
    )
    _check_form(basis, form, antisupersymmetric=False)
    index = {g.name: i for i, g in enumerate(basis)}
    table = {}
    for i, gi in enumerate(basis):
        for gj in basis[i:]:
            key = (gi.name, gj.name)
            entry = {}
            struct = brackets.get(key, {})
            lie = ConformalElement(
                terms={(g, 0): Scalar.coerce(v) for g, v in struct.items()}
            )
            if not lie.is_zero():
                entry[(0,)] = lie
            pairing = Scalar.coerce(form.get(key, Scalar.zero()))
            if not pairing.is_zero():
                entry[(1,)] = ConformalElement(central={central: pairing})
            if entry:
                table[key] = BracketPoly(("lambda",), entry)
    for key in brackets:
        if key not in {(a.name, b.name) for i, a in enumerate(basis) for b in basis[i:]}:
            raise PresentationError(f"bracket pair {key} not in basis order")
    alg = AlgebraPresentation(
        name=name,
        parameters=(level,),
        generators=basis,
        centrals=(CentralDecl(central, Parity.EVEN, Scalar.param(level)),),
        table=table,
    )
    alg.bilinear_form = {k: Scalar.coerce(v) for k, v in form.items()}
    if validate:
        _require_axioms(alg)
    return alg


def free_boson(
    basis=None, form=None, name: str = "free_boson", level: str = "k"
) -> AlgebraPresentation:
    """Abelian current algebra: ``[a_l b] = (a|b) K lambda``."""
    if basis is None:
        basis = (GeneratorDecl("a1", Parity.EVEN), GeneratorDecl("a2", Parity.EVEN))
        form = {("a1", "a1"): 1, ("a2", "a2"): 1}
    form = {k: Scalar.coerce(v) for k, v in (form or {}).items()}
    return current_algebra(basis, {}, form, name=name, level=level)


def free_fermion(
    basis=None,
    form=None,
    name: str = "free_fermion",
    central: str = "K",
    acts_as: ScalarLike | None = 1,
    validate: bool = True,
) -> AlgebraPresentation:
    """Clifford-type conformal algebra: ``[a_l b] = <a, b> K`` with an
    antisupersymmetric form.  Generators default to weight 1/2; the central
    acts as the identity in the vertex layer unless ``acts_as=None``.
    """
    if basis is None:
        basis = (
            GeneratorDecl("psi1", Parity.ODD, Fraction(1, 2)),
            GeneratorDecl("psi2", Parity.ODD, Fraction(1, 2)),
        )
        form = {("psi1", "psi1"): 1, ("psi2", "psi2"): 1}
    basis = tuple(
        GeneratorDecl(
            g.name, g.parity, g.weight if g.weight is not None else Fraction(1, 2)
        )
        for g in basis
    )
    form = {k: Scalar.coerce(v) for k, v in (form or {}).items()}
    _check_form(basis, form, antisupersymmetric=True)
    table = {}
    for i, gi in enumerate(basis):
        for gj in basis[i:]:
            pairing = form.get((gi.name, gj.name), Scalar.zero())
            if not pairing.is_zero():
                table[(gi.name, gj.name)] = BracketPoly(
                    ("lambda",),
                    {(0,): ConformalElement(central={central: pairing})},
                )
    pin = Scalar.coerce(acts_as) if acts_as is not None else None
    alg = AlgebraPresentation(
        name=name,
        parameters=(),
        generators=basis,
        centrals=(CentralDecl(central, Parity.EVEN, pin),),
        table=table,
    )
    alg.bilinear_form = dict(form)
    if validate:
        _require_axioms(alg)
    return alg


def uncharged_superfermions(even: int, odd: int, name=None) -> AlgebraPresentation:
    """Free superfermions on a basis with ``even`` even and ``odd`` odd
    vectors: the even part pairs symplectically (so ``even`` must itself be
    even), the odd part carries the identity form.  Superdimension even-odd.
    """
    if even % 2:
        raise PresentationError(
            "a nondegenerate antisupersymmetric form needs an even number of "
            "even basis vectors"
        )
    basis = []
    form = {}
    for i in range(1, even + 1):
        basis.append(GeneratorDecl(f"b{i}", Parity.EVEN, Fraction(1, 2)))
    for i in range(0, even, 2):
        x, y = f"b{i + 1}", f"b{i + 2}"
        form[(x, y)] = Scalar.one()
        form[(y, x)] = Scalar.from_rational(-1)
    for i in range(1, odd + 1):
        basis.append(GeneratorDecl(f"psi{i}", Parity.ODD, Fraction(1, 2)))
        form[(f"psi{i}", f"psi{i}")] = Scalar.one()
    return free_fermion(
        tuple(basis), form, name=name or f"superfermions_{even}_{odd}"
    )


def sl2_current(level: str = "k") -> AlgebraPresentation:
    """Current algebra over sl2 with the trace form of the fundamental
    representation: (e|f) = 1, (h|h) = 2."""
    basis = (
        GeneratorDecl("e", Parity.EVEN, Fraction(1)),
        GeneratorDecl("f", Parity.EVEN, Fraction(1)),
        GeneratorDecl("h", Parity.EVEN, Fraction(1)),
    )
    brackets = {
        ("e", "f"): {"h": 1},
        ("e", "h"): {"e": -2},
        ("f", "h"): {"f": 2},
    }
    form = {("e", "f"): 1, ("f", "e"): 1, ("h", "h"): 2}
    return current_algebra(basis, brackets, form, name="current_sl2", level=level)


def _require_axioms(alg: AlgebraPresentation):
    skew = check_skew(alg)
    if not skew.passed:
        raise PresentationError(f"presentation fails skew-symmetry:\n{skew}")
    jacobi = check_jacobi(alg)
    if not jacobi.passed:
        raise PresentationError(f"presentation fails the Jacobi identity:\n{jacobi}")


BUILTIN_NAMES = ("virasoro", "neveu_schwarz", "free_fermion", "free_boson", "current_sl2")


def builtin(name: str) -> AlgebraPresentation:
    """Built-in presentations by name (default instances for the CLI)."""
    factories = {
        "virasoro": virasoro,
        "neveu_schwarz": neveu_schwarz,
        "free_fermion": free_fermion,
        "free_boson": free_boson,
        "current_sl2": sl2_current,
    }
    try:
        return factories[name]()
    except KeyError:
        raise VacalcError(
            f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}"
        ) from None
