"""Vertex-algebra layer over a conformal presentation.

States are linear combinations of canonical normally ordered words over
derivatives of the generators, plus a vacuum multiple and symbolic central
multiples.  Canonical words are right-nested with a fixed atom order
(declaration index, then decreasing derivative power); reordering uses the
mode commutator ``[a_(-1), b_(-1)] = sum_j (-1)^j (a_(j) b)_(-2-j)`` and
repeated equal odd atoms resolve through the same identity, so equality of
states is decidable.

The bracket recursion: a derivative on the left factor pulls out
``(-lambda)``; a composite right operand peels its head atom through the
non-abelian Wick formula (with the formal integral term); a composite left
operand against a single atom flips through quasi-symmetry
``[x_lambda y] = -p(x,y) [y_(-lambda-T) x]``.  Every path terminates because
bracket tables are linear in the generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .lie_conformal import (
    AlgebraPresentation,
    ConformalElement,
    Parity,
    ParityError,
    UndeclaredSymbolError,
    VacalcError,
    lambda_bracket,
)
from .poly import BracketPoly, integrate_zero_to_lambda, substitute_skew
from .scalar import Scalar, ScalarLike, binom, factorial

DEFAULT_MAX_LAMBDA_DEGREE = 64


class EngineLimitError(VacalcError):
    """A recursion or degree guard tripped (inconsistent table suspected)."""


class NormalWord:
    """Right-nested normally ordered word: atoms ``(generator, d-power)``."""

    __slots__ = ("atoms",)

    def __init__(self, atoms: Iterable):
        atoms = tuple((g, int(d)) for g, d in atoms)
        if not atoms:
            raise ValueError("normal words are nonempty; use the vacuum instead")
        if any(d < 0 for _, d in atoms):
            raise ValueError("derivative powers must be non-negative")
        self.atoms = atoms

    def __len__(self):
        return len(self.atoms)

    def __eq__(self, other):
        if not isinstance(other, NormalWord):
            return NotImplemented
        return self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __str__(self):
        return _render_atoms(self.atoms)

    __repr__ = __str__


def _render_atom(atom) -> str:
    g, d = atom
    if d == 0:
        return g
    if d == 1:
        return f"d({g})"
    return f"d^{d}({g})"


def _render_atoms(atoms) -> str:
    if len(atoms) == 1:
        return _render_atom(atoms[0])
    return f":{_render_atom(atoms[0])} {_render_atoms(atoms[1:])}:"


class VertexElement:
    """State of the vertex algebra attached to a presentation."""

    __slots__ = ("alg", "words", "vacuum", "centrals")

    def __init__(self, alg: AlgebraPresentation, words=None, vacuum=0, centrals=None):
        self.alg = alg
        clean = {}
        if words:
            for word, value in dict(words).items():
                value = Scalar.coerce(value)
                if value.is_zero():
                    continue
                if not isinstance(word, NormalWord):
                    word = NormalWord(word)
                for g, _ in word.atoms:
                    if not alg.is_generator(g):
                        raise UndeclaredSymbolError(
                            f"undeclared generator {g!r} in word {word}"
                        )
                clean[word] = value
        self.words = clean
        self.vacuum = Scalar.coerce(vacuum)
        cents = {}
        if centrals:
            for cid, value in dict(centrals).items():
                value = Scalar.coerce(value)
                if not alg.is_central(cid):
                    raise UndeclaredSymbolError(f"undeclared central {cid!r}")
                if not value.is_zero():
                    cents[cid] = value
        self.centrals = cents

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.words and self.vacuum.is_zero() and not self.centrals

    def _require_same(self, other: "VertexElement"):
        if self.alg is not other.alg:
            raise VacalcError("cannot combine states over different presentations")

    # -- module operations ------------------------------------------------------

    def add(self, other: "VertexElement") -> "VertexElement":
        self._require_same(other)
        words = dict(self.words)
        for word, value in other.words.items():
            new = words.get(word, Scalar.zero()) + value
            if new.is_zero():
                words.pop(word, None)
            else:
                words[word] = new
        centrals = dict(self.centrals)
        for cid, value in other.centrals.items():
            new = centrals.get(cid, Scalar.zero()) + value
            if new.is_zero():
                centrals.pop(cid, None)
            else:
                centrals[cid] = new
        out = VertexElement.__new__(VertexElement)
        out.alg = self.alg
        out.words = words
        out.vacuum = self.vacuum + other.vacuum
        out.centrals = centrals
        return out

    def neg(self) -> "VertexElement":
        return self.scale(-1)

    def sub(self, other: "VertexElement") -> "VertexElement":
        return self.add(other.neg())

    def scale(self, factor: ScalarLike) -> "VertexElement":
        factor = Scalar.coerce(factor)
        out = VertexElement.__new__(VertexElement)
        out.alg = self.alg
        out.words = {
            w: v for w, v in ((w, v * factor) for w, v in self.words.items())
            if not v.is_zero()
        }
        out.vacuum = self.vacuum * factor
        out.centrals = {
            c: v for c, v in ((c, v * factor) for c, v in self.centrals.items())
            if not v.is_zero()
        }
        return out

    def translate(self) -> "VertexElement":
        """The translation operator T: Leibniz on words, zero on the vacuum
        and on centrals.  Words are re-canonicalized (a raised derivative can
        create a repeated odd atom that must reduce)."""
        eng = engine(self.alg)
        out = zero(self.alg)
        for word, value in self.words.items():
            for i in range(len(word)):
                atoms = list(word.atoms)
                atoms[i] = (atoms[i][0], atoms[i][1] + 1)
                out = out.add(eng.word_element(atoms).scale(value))
        return out

    def translate_power(self, k: int) -> "VertexElement":
        out = self
        for _ in range(k):
            out = out.translate()
        return out

    def __eq__(self, other):
        if not isinstance(other, VertexElement):
            return NotImplemented
        return (
            self.alg is other.alg
            and self.words == other.words
            and self.vacuum == other.vacuum
            and self.centrals == other.centrals
        )

    def __str__(self):
        from .lie_conformal import _join, _scaled

        parts = []
        for word in sorted(self.words, key=lambda w: (len(w), w.atoms)):
            parts.append(_scaled(str(word), self.words[word]))
        if not self.vacuum.is_zero():
            parts.append(_scaled("vac", self.vacuum))
        for cid in sorted(self.centrals):
            parts.append(_scaled(cid, self.centrals[cid]))
        return _join(parts)

    __repr__ = __str__


# -- element constructors ------------------------------------------------------


def zero(alg: AlgebraPresentation) -> VertexElement:
    return VertexElement(alg)


def vacuum(alg: AlgebraPresentation) -> VertexElement:
    return VertexElement(alg, vacuum=1)


def state(alg: AlgebraPresentation, name: str, dpow: int = 0) -> VertexElement:
    """The state of a declared generator or central (pinned centrals reduce
    to vacuum multiples)."""
    if alg.is_generator(name):
        return VertexElement(alg, words={NormalWord(((name, dpow),)): 1})
    if alg.is_central(name):
        if dpow > 0:
            return zero(alg)
        return from_conformal(alg, alg.gen(name))
    raise UndeclaredSymbolError(f"undeclared symbol {name!r}")


def from_conformal(alg: AlgebraPresentation, e: ConformalElement) -> VertexElement:
    """Embed a C[d]-module element; a central pinned by ``acts_as`` becomes
    that scalar multiple of the vacuum."""
    words = {NormalWord(((g, d),)): v for (g, d), v in e.terms.items()}
    vac = Scalar.zero()
    cents = {}
    for cid, value in e.central.items():
        acts = alg.acts_as(cid)
        if acts is not None:
            vac = vac + value * acts
        else:
            cents[cid] = value
    return VertexElement(alg, words=words, vacuum=vac, centrals=cents)


def normal_word(alg: AlgebraPresentation, atoms: Iterable) -> VertexElement:
    """Right-nested normally ordered product of derivative atoms, in
    canonical form (reordering corrections included)."""
    return engine(alg).word_element(atoms)


# ---------------------------------------------------------------------------
# The evaluation engine
# ---------------------------------------------------------------------------


class VertexEngine:
    def __init__(self, alg: AlgebraPresentation, max_lambda_degree=DEFAULT_MAX_LAMBDA_DEGREE):
        self.alg = alg
        self.max_lambda_degree = max_lambda_degree
        self._bracket_cache: dict = {}
        self._insert_cache: dict = {}
        self._depth = 0

    # -- structural helpers ------------------------------------------------------

    def atom_key(self, atom):
        g, d = atom
        return (self.alg.index(g), -d)

    def atom_parity(self, atom) -> Parity:
        return self.alg.parity(atom[0])

    def word_parity(self, word: NormalWord) -> Parity:
        p = Parity.EVEN
        for atom in word.atoms:
            p = p + self.atom_parity(atom)
        return p

    def element_parity(self, x: VertexElement) -> Parity:
        parities = {self.word_parity(w) for w in x.words}
        if not x.vacuum.is_zero():
            parities.add(Parity.EVEN)
        for cid in x.centrals:
            parities.add(self.alg.parity(cid))
        if len(parities) > 1:
            raise ParityError(f"state {x} mixes parities")
        return parities.pop() if parities else Parity.EVEN

    def _guard(self):
        self._depth += 1
        if self._depth > 4000:
            raise EngineLimitError(
                "recursion limit exceeded; the bracket table is probably "
                "inconsistent with locality"
            )

    # -- canonical words ----------------------------------------------------------

    def word_element(self, atoms) -> VertexElement:
        """Canonicalize an atom sequence read as a right-nested word."""
        atoms = [(g, int(d)) for g, d in atoms]
        if not atoms:
            return vacuum(self.alg)
        out = self.atom_element(atoms[-1])
        for atom in reversed(atoms[:-1]):
            out = self.insert_atom(atom, out)
        return out

    def atom_element(self, atom) -> VertexElement:
        return VertexElement(self.alg, words={NormalWord((atom,)): 1})

    def insert_atom(self, atom, y: VertexElement) -> VertexElement:
        """Normal product of a single derivative atom with a canonical state."""
        out = zero(self.alg)
        if not y.vacuum.is_zero():
            out = out.add(self.atom_element(atom).scale(y.vacuum))
        if y.centrals:
            raise VacalcError(
                "normal product with an unpinned central is undefined; pin it "
                "with 'acts' or keep it out of products"
            )
        for word, value in y.words.items():
            out = out.add(self._insert_atom_word(atom, word).scale(value))
        return out

    def _insert_atom_word(self, atom, word: NormalWord) -> VertexElement:
        key = (atom, word)
        cached = self._insert_cache.get(key)
        if cached is not None:
            return cached
        self._guard()
        try:
            head = word.atoms[0]
            ka, kb = self.atom_key(atom), self.atom_key(head)
            if ka < kb or (ka == kb and self.atom_parity(atom) is Parity.EVEN):
                result = VertexElement(
                    self.alg, words={NormalWord((atom,) + word.atoms): 1}
                )
            elif ka == kb:
                # Repeated odd atom: 2 a_(-1) a_(-1) = sum_j (-1)^j (a_(j)a)_(-2-j).
                rest = self._tail_element(word)
                result = zero(self.alg)
                for j, prod in self._atom_jproducts(atom, head):
                    result = result.add(
                        self.nproduct(prod, -2 - j, rest).scale(
                            Fraction(-1) ** j * Fraction(1, 2)
                        )
                    )
            else:
                # Straighten: a b = p(a,b) b a + [a_(-1), b_(-1)].
                rest = self._tail_element(word)
                sign = self.atom_parity(atom).sign_with(self.atom_parity(head))
                main = self.insert_atom(
                    head, self._insert_or_atom(atom, word.atoms[1:])
                ).scale(sign)
                result = main
                for j, prod in self._atom_jproducts(atom, head):
                    result = result.add(
                        self.nproduct(prod, -2 - j, rest).scale(Fraction(-1) ** j)
                    )
        finally:
            self._depth -= 1
        self._insert_cache[key] = result
        return result

    def _tail_element(self, word: NormalWord) -> VertexElement:
        if len(word) == 1:
            return vacuum(self.alg)
        return VertexElement(self.alg, words={NormalWord(word.atoms[1:]): 1})

    def _insert_or_atom(self, atom, tail_atoms) -> VertexElement:
        if not tail_atoms:
            return self.atom_element(atom)
        return self._insert_atom_word(atom, NormalWord(tail_atoms))

    def _atom_jproducts(self, a, b):
        """Nonzero products ``a_(j) b`` (j >= 0) of two derivative atoms."""
        poly = self._word_bracket(NormalWord((a,)), NormalWord((b,)))
        return [
            (j, value.scale(factorial(j)))
            for (j,), value in sorted(poly.coeffs.items())
        ]

    # -- the lambda-bracket ----------------------------------------------------------

    def bracket(self, x: VertexElement, y: VertexElement) -> BracketPoly:
        x._require_same(y)
        self.element_parity(x)
        self.element_parity(y)
        out = BracketPoly.zero(("lambda",))
        for wx, sx in sorted(x.words.items(), key=lambda kv: kv[0].atoms):
            for wy, sy in sorted(y.words.items(), key=lambda kv: kv[0].atoms):
                out = out.add(self._word_bracket(wx, wy).scale(sx * sy))
        if (
            self.max_lambda_degree is not None
            and out.degree("lambda") > self.max_lambda_degree
        ):
            raise EngineLimitError(
                f"lambda degree exceeds guard {self.max_lambda_degree}"
            )
        return out

    def _word_bracket(self, W: NormalWord, U: NormalWord) -> BracketPoly:
        key = (W, U)
        cached = self._bracket_cache.get(key)
        if cached is not None:
            return cached
        self._guard()
        try:
            g, d = W.atoms[0]
            if len(W) == 1 and d > 0:
                base = self._word_bracket(NormalWord(((g, 0),)), U)
                result = base.shift_power("lambda", d).scale(Fraction(-1) ** d)
            elif len(W) == 1 and len(U) == 1:
                h, e = U.atoms[0]
                conf = lambda_bracket(self.alg.gen(g), self.alg.gen(h, e), self.alg)
                result = conf.map_coeffs(lambda c: from_conformal(self.alg, c))
            elif len(U) == 1:
                # Composite left, single right: quasi-symmetry flip.
                inner = self._word_bracket(U, W)
                sign = -self.word_parity(W).sign_with(self.word_parity(U))
                result = substitute_skew(inner).scale(sign)
            else:
                result = self._wick_composite_right(W, U)
        finally:
            self._depth -= 1
        self._bracket_cache[key] = result
        return result

    def _wick_composite_right(self, W: NormalWord, U: NormalWord) -> BracketPoly:
        """Non-abelian Wick formula on ``U = :head rest:``:
        ``[W_l :hc:] = :[W_l h] c: + p(W,h) :h [W_l c]: + int_0^l [[W_l h]_m c] dm``.
        """
        head = U.atoms[0]
        head_elem = self.atom_element(head)
        rest_elem = self._tail_element(U)
        t_head = self._word_bracket(W, NormalWord((head,)))
        t_rest = self.bracket(
            VertexElement(self.alg, words={W: 1}), rest_elem
        )
        out = BracketPoly.zero(("lambda",))
        for (i,), value in t_head.coeffs.items():
            prod = self.normal_product(value, rest_elem)
            out = out.add(BracketPoly.constant(prod).shift_power("lambda", i))
        sign = self.word_parity(W).sign_with(self.atom_parity(head))
        for (i,), value in t_rest.coeffs.items():
            prod = self.normal_product(head_elem, value)
            out = out.add(
                BracketPoly.constant(prod).shift_power("lambda", i).scale(sign)
            )
        for (i,), value in t_head.coeffs.items():
            integrand = self.bracket(value, rest_elem)  # polynomial in mu
            integral = integrate_zero_to_lambda(integrand)
            out = out.add(integral.shift_power("lambda", i))
        return out

    # -- products ------------------------------------------------------------------

    def normal_product(self, x: VertexElement, y: VertexElement) -> VertexElement:
        x._require_same(y)
        out = zero(self.alg)
        if not x.vacuum.is_zero():
            out = out.add(y.scale(x.vacuum))
        for cid, value in x.centrals.items():
            if y.words or y.centrals:
                raise VacalcError(
                    f"normal product with unpinned central {cid!r} is undefined"
                )
            if not y.vacuum.is_zero():
                out = out.add(
                    VertexElement(self.alg, centrals={cid: value * y.vacuum})
                )
        for word, value in sorted(x.words.items(), key=lambda kv: kv[0].atoms):
            if not y.vacuum.is_zero():
                out = out.add(
                    VertexElement(self.alg, words={word: value * y.vacuum})
                )
            secondary = VertexElement(
                self.alg, words=y.words, centrals=y.centrals
            )
            if not secondary.is_zero():
                out = out.add(self._word_product(word, secondary).scale(value))
        return out

    def _word_product(self, W: NormalWord, y: VertexElement) -> VertexElement:
        """``: W y :`` for a canonical word against a vacuum-free state."""
        if y.centrals:
            raise VacalcError(
                "normal product with an unpinned central is undefined"
            )
        if len(W) == 1:
            out = zero(self.alg)
            for word, value in y.words.items():
                out = out.add(self._insert_atom_word(W.atoms[0], word).scale(value))
            return out
        # Quasi-associativity: (a_(-1) b)_(-1) c = a_(-1)(b_(-1) c)
        #   + sum_j a_(-j-2)(b_(j) c) + p(a,b) sum_j b_(-j-2)(a_(j) c).
        a_atom = W.atoms[0]
        b_word = NormalWord(W.atoms[1:])
        a_elem = self.atom_element(a_atom)
        b_elem = VertexElement(self.alg, words={b_word: 1})
        out = self.insert_atom(a_atom, self._word_product(b_word, y))
        for j, prod in self._jproducts(b_elem, y):
            out = out.add(self.nproduct(a_elem, -2 - j, prod))
        sign = self.atom_parity(a_atom).sign_with(self.word_parity(b_word))
        for j, prod in self._jproducts(a_elem, y):
            out = out.add(self.nproduct(b_elem, -2 - j, prod).scale(sign))
        return out

    def _jproducts(self, x: VertexElement, y: VertexElement):
        poly = self.bracket(x, y)
        return [
            (j, value.scale(factorial(j)))
            for (j,), value in sorted(poly.coeffs.items())
        ]

    def nproduct(self, x: VertexElement, n: int, y: VertexElement) -> VertexElement:
        if n >= 0:
            poly = self.bracket(x, y)
            coeff = poly.coefficient((n,), zero(self.alg))
            return coeff.scale(factorial(n))
        j = -1 - n
        left = x.translate_power(j).scale(Fraction(1, factorial(j)))
        return self.normal_product(left, y)


def engine(
    alg: AlgebraPresentation, max_lambda_degree=None
) -> VertexEngine:
    """Evaluation engine for a presentation; caches attach to the presentation."""
    eng = getattr(alg, "_vertex_engine", None)
    if eng is None:
        eng = VertexEngine(alg)
        alg._vertex_engine = eng
    if max_lambda_degree is not None:
        eng.max_lambda_degree = max_lambda_degree
    return eng


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def wick_bracket(x: VertexElement, y: VertexElement, alg=None) -> BracketPoly:
    """Full lambda-bracket on the differential algebra generated by the
    presentation, via the Wick recursion."""
    return engine(alg or x.alg).bracket(x, y)


def nproduct(x: VertexElement, n: int, y: VertexElement, alg=None) -> VertexElement:
    """Generalized n-th product: positive products from the bracket, negative
    products ``x_(-1-j) y = : (T^j x / j!) y :``."""
    return engine(alg or x.alg).nproduct(x, n, y)


def normal_product(x: VertexElement, y: VertexElement, alg=None) -> VertexElement:
    """``: x y : = x_(-1) y`` in canonical form."""
    return engine(alg or x.alg).normal_product(x, y)


def vertex_jproducts(x: VertexElement, y: VertexElement, alg=None):
    return engine(alg or x.alg)._jproducts(x, y)


def quasi_comm_defect(x: VertexElement, y: VertexElement, alg=None) -> VertexElement:
    """The quantum correction ``int_(-T)^0 [x_l y] dl``; equals
    ``:xy: - p(x,y) :yx:``.  Each bracket coefficient c_j of lambda^j
    contributes ``(-1)^j T^(j+1) c_j / (j+1)``."""
    eng = engine(alg or x.alg)
    poly = eng.bracket(x, y)
    out = zero(eng.alg)
    for (j,), value in poly.coeffs.items():
        out = out.add(
            value.translate_power(j + 1).scale(
                Fraction(-1) ** j * Fraction(1, j + 1)
            )
        )
    return out


def quasi_assoc_rewrite(x: VertexElement, y: VertexElement, alg=None) -> VertexElement:
    """Canonical form of the left-nested product ``(x)_(-1) y``."""
    return engine(alg or x.alg).nproduct(x, -1, y)


def quasi_assoc_defect_sum(a, b, c, alg=None) -> VertexElement:
    """Associativity defect ``(a_(-1)b)_(-1)c - a_(-1)(b_(-1)c)`` as the sum
    ``sum_j a_(-j-2)(b_(j)c) + p(a,b) sum_j b_(-j-2)(a_(j)c)``."""
    eng = engine(alg or a.alg)
    out = zero(eng.alg)
    for j, prod in eng._jproducts(b, c):
        out = out.add(eng.nproduct(a, -2 - j, prod))
    sign = eng.element_parity(a).sign_with(eng.element_parity(b))
    for j, prod in eng._jproducts(a, c):
        out = out.add(eng.nproduct(b, -2 - j, prod).scale(sign))
    return out


def quasi_assoc_defect_integral(a, b, c, alg=None) -> VertexElement:
    """Same defect through the formal-integral reading: expand the bracket in
    powers of lambda, integrate ``int_0^T``, and place the resulting
    T-powers on the left factor of the (-1)-product."""
    eng = engine(alg or a.alg)
    out = zero(eng.alg)

    def contribution(left, right):
        acc = zero(eng.alg)
        poly = eng.bracket(right, c)
        for (j,), coeff in poly.coeffs.items():
            # int_0^T lambda^j dl = T^(j+1)/(j+1), applied to the left factor.
            shifted = left.translate_power(j + 1).scale(Fraction(1, j + 1))
            acc = acc.add(eng.normal_product(shifted, coeff))
        return acc

    out = out.add(contribution(a, b))
    sign = eng.element_parity(a).sign_with(eng.element_parity(b))
    out = out.add(contribution(b, a).scale(sign))
    return out


@dataclass
class IdentityReport:
    name: str
    subject: tuple
    lhs: VertexElement
    rhs: VertexElement

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def __str__(self):
        where = ", ".join(str(s) for s in self.subject)
        status = "ok" if self.passed else "FAIL"
        lines = [f"{self.name} at ({where}): {status}"]
        if not self.passed:
            lines.append(f"  lhs = {self.lhs}")
            lines.append(f"  rhs = {self.rhs}")
            lines.append(f"  diff = {self.lhs.sub(self.rhs)}")
        return "\n".join(lines)


def borcherds_nproducts_check(
    a: VertexElement, b: VertexElement, n: int, alg=None
) -> IdentityReport:
    """Quasi-symmetry in mode form:
    ``a_(n)b = -p(a,b) (-1)^n sum_j (-T)^j / j! (b_(n+j) a)``."""
    eng = engine(alg or a.alg)
    lhs = eng.nproduct(a, n, b)
    degree = eng.bracket(b, a).degree("lambda")
    jmax = max(0, degree - n, -n - 1)
    total = zero(eng.alg)
    for j in range(jmax + 1):
        term = eng.nproduct(b, n + j, a)
        total = total.add(
            term.translate_power(j).scale(
                Fraction(-1) ** j * Fraction(1, factorial(j))
            )
        )
    sign = -eng.element_parity(a).sign_with(eng.element_parity(b)) * Fraction(-1) ** n
    rhs = total.scale(sign)
    return IdentityReport("borcherds-n-products", (f"n={n}",), lhs, rhs)


def borcherds_identity_check(
    a: VertexElement,
    b: VertexElement,
    c: VertexElement,
    m: int,
    n: int,
    q: int,
    alg=None,
) -> IdentityReport:
    """The master identity
    ``sum_i C(m,i) (a_(q+i) b)_(m+n-i) c =
      sum_i (-1)^i C(q,i) ( a_(m+q-i)(b_(n+i) c)
                            - p(a,b) (-1)^q b_(n+q-i)(a_(m+i) c) )``.
    All sums are finite: positive products vanish beyond the bracket degree.
    At q = 0 this is the graded mode-commutator formula.
    """
    eng = engine(alg or a.alg)
    deg_ab = eng.bracket(a, b).degree("lambda")
    lhs = zero(eng.alg)
    for i in range(max(0, deg_ab - q) + 1):
        coeff = binom(m, i)
        if not coeff:
            continue
        inner = eng.nproduct(a, q + i, b)
        if inner.is_zero():
            continue
        lhs = lhs.add(eng.nproduct(inner, m + n - i, c).scale(coeff))
    deg_bc = eng.bracket(b, c).degree("lambda")
    deg_ac = eng.bracket(a, c).degree("lambda")
    if q >= 0:
        imax = q
    else:
        imax = max(0, deg_bc - n, deg_ac - m)
    sign_q = Fraction(-1) ** q * eng.element_parity(a).sign_with(eng.element_parity(b))
    rhs = zero(eng.alg)
    for i in range(imax + 1):
        coeff = binom(q, i) * Fraction(-1) ** i
        if not coeff:
            continue
        first = eng.nproduct(a, m + q - i, eng.nproduct(b, n + i, c))
        second = eng.nproduct(b, n + q - i, eng.nproduct(a, m + i, c))
        rhs = rhs.add(first.sub(second.scale(sign_q)).scale(coeff))
    return IdentityReport("borcherds-identity", (f"m={m}", f"n={n}", f"q={q}"), lhs, rhs)


# -- weights ------------------------------------------------------------------


def word_weight(word: NormalWord, table: Mapping[str, Fraction]) -> Fraction:
    total = Fraction(0)
    for g, d in word.atoms:
        if g not in table:
            raise VacalcError(f"no declared weight for generator {g!r}")
        total += Fraction(table[g]) + d
    return total


def weight(x: VertexElement, table: Mapping[str, Fraction]) -> Fraction | None:
    """Common weight of a state (vacuum and centrals count as weight 0), or
    None when the state is zero or mixes weights."""
    values = {word_weight(w, table) for w in x.words}
    if not x.vacuum.is_zero() or x.centrals:
        values.add(Fraction(0))
    if len(values) == 1:
        return values.pop()
    return None


@dataclass
class PrimaryResult:
    kind: str  # "primary" | "eigen" | "neither"
    weight: Fraction | None = None
    tail: BracketPoly | None = None

    def __str__(self):
        if self.kind == "primary":
            return f"primary({self.weight})"
        if self.kind == "eigen":
            parts = [
                f"lambda^{e[0]}: {v}" for e, v in (self.tail.terms() if self.tail else [])
            ]
            return f"eigen({self.weight}; tail {'; '.join(parts)})"
        return "neither"


def primary_check(name: str, L: VertexElement, alg=None) -> PrimaryResult:
    """Classify a generator against a (Virasoro-type) even state L by the
    shape of ``[L_lambda a]``: primary means exactly ``(T + D lambda) a``."""
    eng = engine(alg or L.alg)
    a = state(eng.alg, name)
    poly = eng.bracket(L, a)
    lam0 = poly.coefficient((0,), zero(eng.alg))
    lam1 = poly.coefficient((1,), zero(eng.alg))
    if lam0 != a.translate():
        return PrimaryResult("neither")
    target = NormalWord(((name, 0),))
    if lam1.is_zero():
        delta = Fraction(0)
    else:
        if set(lam1.words) != {target} or not lam1.vacuum.is_zero() or lam1.centrals:
            return PrimaryResult("neither")
        coeff = lam1.words[target]
        if not coeff.is_constant():
            return PrimaryResult("neither")
        delta = coeff.as_rational()
    tail = BracketPoly(
        ("lambda",), {e: v for e, v in poly.coeffs.items() if e[0] >= 2}
    )
    if tail.is_zero():
        return PrimaryResult("primary", delta)
    return PrimaryResult("eigen", delta, tail)


def mode_of_primary(name: str, m, n, L: VertexElement, alg=None, table=None):
    """Closed-form mode bracket with a primary generator:
    ``[L_m, a_n] = (m (D-1) - n) a_(m+n)`` in weight indexing."""
    from .mode_algebra import WEIGHT, ModeExpression, ModeSymbol

    eng = engine(alg or L.alg)
    result = primary_check(name, L, eng.alg)
    if result.kind != "primary":
        raise VacalcError(f"{name!r} is not primary: {result}")
    delta = result.weight
    m = Scalar.coerce(m)
    n = Scalar.coerce(n)
    coeff = m * Scalar.from_rational(delta - 1) - n
    return ModeExpression(terms={ModeSymbol(name, m + n, WEIGHT): coeff})


# -- free superfermions ---------------------------------------------------------


def _invert_rational_matrix(rows):
    """Gauss-Jordan inverse of a square matrix of Fractions."""
    size = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(rows)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise VacalcError("bilinear form is degenerate")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        factor = aug[col][col]
        aug[col] = [v / factor for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def fermion_conformal_vector(alg: AlgebraPresentation) -> VertexElement:
    """The state ``1/2 sum_i : d(dual_i) basis_i :`` built from the stored
    bilinear form of a free-fermion presentation."""
    form = getattr(alg, "bilinear_form", None)
    if form is None:
        raise VacalcError("presentation carries no bilinear form")
    names = [g.name for g in alg.generators]
    rows = [
        [Scalar.coerce(form.get((a, b), 0)).as_rational() for b in names]
        for a in names
    ]
    inverse = _invert_rational_matrix(rows)
    eng = engine(alg)
    out = zero(alg)
    for i, name in enumerate(names):
        # dual_i = sum_k inverse[k][i] basis_k satisfies <basis_j, dual_i> = delta_ij.
        dual = zero(alg)
        for k, other in enumerate(names):
            if inverse[k][i]:
                dual = dual.add(state(alg, other, 1).scale(inverse[k][i]))
        out = out.add(eng.normal_product(dual, state(alg, name)))
    return out.scale(Fraction(1, 2))
