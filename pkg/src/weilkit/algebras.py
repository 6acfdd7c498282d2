"""Weil algebras: finitely presented truncated-polynomial quotients,
their elements, algebra morphisms, and tensor products.

An algebra is presented by named variables, relation polynomials with
zero constant term, and an explicit nilpotency order k; the ideal is
``<relations> + m^k`` where m is the maximal ideal at the origin.  The
quotient is finite dimensional with the non-pivot monomials of total
degree < k as its canonical basis.

Elements store coordinates on that basis.  Each element is uniformly in
one of two scalar modes — exact ``Fraction`` or double-precision float —
and the two are never mixed inside one element or one operation.

Morphisms are represented by their polynomial substitution data
(``psibar``): one polynomial per *source* variable, written in the
*target* variables, with zero constant term, such that every generator
of the source ideal reduces to zero in the target after substitution.
Applying a morphism to an element substitutes into a canonical
representative and reduces; this is precomputed as a linear action on
the source basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

from .errors import (
    AlgebraMismatch,
    BasePointViolation,
    DomainError,
    IdealViolation,
    ImproperIdeal,
    ParseError,
    ScalarModeError,
)
from .polynomials import (
    Monomial,
    Polynomial,
    ReductionBasis,
    build_reduction_basis,
    embed_poly,
    from_monomial,
    monomials_of_degree,
    parse_polynomial,
    unit_monomial,
    var_monomial,
)

Scalar = Union[Fraction, float]

RATIONAL = "rational"
REAL = "real"


@dataclass(frozen=True)
class WeilPresentation:
    """Plain-data presentation: ordered variable names, relation strings
    (polynomial grammar), and a positive nilpotency order."""

    variables: Tuple[str, ...]
    relations: Tuple[str, ...]
    nilpotency: int

    @staticmethod
    def from_dict(data: dict) -> "WeilPresentation":
        try:
            variables = tuple(data["variables"])
            relations = tuple(data["relations"])
            nilpotency = data["nilpotency"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"presentation record missing field: {exc}") from exc
        if not all(isinstance(v, str) and v for v in variables):
            raise ParseError("variables must be nonempty strings")
        if len(set(variables)) != len(variables):
            raise ParseError("variable names must be distinct")
        if not all(isinstance(r, str) for r in relations):
            raise ParseError("relations must be strings")
        if not isinstance(nilpotency, int) or nilpotency < 1:
            raise ParseError("nilpotency must be a positive integer")
        return WeilPresentation(variables, relations, nilpotency)

    @staticmethod
    def from_file(path: str | Path) -> "WeilPresentation":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read presentation file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ParseError("presentation file must hold a top-level record")
        return WeilPresentation.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "relations": list(self.relations),
            "nilpotency": self.nilpotency,
        }


class WeilAlgebra:
    """Finite-dimensional local quotient with precomputed reduction data
    and multiplication table.  Identity is structural: variable names,
    nilpotency order, and the canonical echelon rows."""

    __slots__ = (
        "names",
        "nvars",
        "order",
        "relations",
        "reduction",
        "basis",
        "basis_index",
        "dimension",
        "_mul_table",
        "_sig",
        "_hash",
    )

    def __init__(self, names: Sequence[str], relations: Sequence[Polynomial], order: int):
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        if order < 1:
            raise ValueError("nilpotency order must be >= 1")
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.order = order
        self.relations = tuple(relations)
        for rel in self.relations:
            if rel.nvars != self.nvars:
                raise ValueError("relation arity mismatch")
            if rel.constant_term() != 0:
                raise ImproperIdeal(
                    f"relation {rel.format(self.names)} has nonzero constant term"
                )
        self.reduction = build_reduction_basis(self.relations, self.nvars, order)
        self.basis = tuple(self.reduction.quotient_basis())
        self.basis_index = {m: i for i, m in enumerate(self.basis)}
        self.dimension = len(self.basis)
        if unit_monomial(self.nvars) not in self.basis_index:
            raise ImproperIdeal("constant monomial not in quotient basis")
        self._mul_table = self._build_mul_table()
        rows_sig = tuple(
            (pivot, tuple(row.sorted_terms())) for pivot, row in self.reduction.rows
        )
        self._sig = (self.names, self.order, rows_sig)
        self._hash = hash(self._sig)

    # -- identity ---------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, WeilAlgebra) and self._sig == other._sig

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        rels = ", ".join(r.format(self.names) for r in self.relations) or "0"
        return f"WeilAlgebra([{', '.join(self.names)}], <{rels}> + m^{self.order})"

    # -- structure --------------------------------------------------------
    def _build_mul_table(self):
        table: Dict[Tuple[Monomial, Monomial], Tuple[Tuple[Monomial, Fraction], ...]] = {}
        n = self.dimension
        for i in range(n):
            mi = self.basis[i]
            for j in range(i, n):
                mj = self.basis[j]
                prod = mi.mul(mj)
                if prod.degree >= self.order:
                    entry: Tuple[Tuple[Monomial, Fraction], ...] = ()
                elif prod in self.basis_index:
                    entry = ((prod, Fraction(1)),)
                else:
                    nf = self.reduction.normal_form(from_monomial(prod))
                    entry = tuple(nf.sorted_terms())
                table[(mi, mj)] = entry
        return table

    def basis_product(self, m1: Monomial, m2: Monomial) -> Tuple[Tuple[Monomial, Fraction], ...]:
        """Normal form of the product of two basis monomials, as
        (basis monomial, rational coefficient) pairs."""
        key = (m1, m2) if m1.key() <= m2.key() else (m2, m1)
        return self._mul_table[key]

    def ideal_generators(self) -> List[Polynomial]:
        """The presented relations together with the degree-k monomial
        witnesses of m^k — a full generator set of the ideal."""
        gens = list(self.relations)
        for mono in monomials_of_degree(self.nvars, self.order):
            gens.append(from_monomial(mono))
        return gens

    # -- element constructors ----------------------------------------------
    def _coerce(self, value: Scalar, mode: str) -> Scalar:
        if mode == RATIONAL:
            if isinstance(value, float):
                raise ScalarModeError("float scalar in rational mode")
            return Fraction(value)
        return float(value)

    def element(self, coords: Dict[Monomial, Scalar], mode: str = RATIONAL) -> "WeilElement":
        clean: Dict[Monomial, Scalar] = {}
        for mono, c in coords.items():
            if mono not in self.basis_index:
                raise ValueError(f"{mono} is not a quotient-basis monomial")
            cc = self._coerce(c, mode)
            if cc != 0:
                clean[mono] = cc
        return WeilElement(self, clean, mode)

    def zero(self, mode: str = RATIONAL) -> "WeilElement":
        return WeilElement(self, {}, mode)

    def one(self, mode: str = RATIONAL) -> "WeilElement":
        return self.const(1, mode)

    def const(self, value: Scalar, mode: str | None = None) -> "WeilElement":
        if mode is None:
            mode = REAL if isinstance(value, float) else RATIONAL
        v = self._coerce(value, mode)
        coords = {} if v == 0 else {unit_monomial(self.nvars): v}
        return WeilElement(self, coords, mode)

    def from_polynomial(self, poly: Polynomial, mode: str = RATIONAL) -> "WeilElement":
        """Reduce an exact polynomial representative to its element."""
        nf = self.reduction.normal_form(poly)
        coords: Dict[Monomial, Scalar] = {}
        for mono, c in nf.terms.items():
            coords[mono] = c if mode == RATIONAL else float(c)
        return WeilElement(self, coords, mode)

    def var_element(self, index: int, mode: str = RATIONAL) -> "WeilElement":
        """The class of the i-th presentation variable."""
        if not 0 <= index < self.nvars:
            raise ValueError("variable index out of range")
        return self.from_polynomial(
            from_monomial(var_monomial(self.nvars, index)), mode
        )

    def basis_element(self, mono: Monomial, mode: str = RATIONAL) -> "WeilElement":
        one: Scalar = Fraction(1) if mode == RATIONAL else 1.0
        return self.element({mono: one}, mode)

    def generic_point(self, mode: str = RATIONAL) -> Tuple["WeilElement", ...]:
        """The universal point (class of x_1, ..., class of x_n)."""
        return tuple(self.var_element(i, mode) for i in range(self.nvars))


class WeilElement:
    """Coordinates on the quotient basis, in a single scalar mode."""

    __slots__ = ("algebra", "coords", "mode")

    def __init__(self, algebra: WeilAlgebra, coords: Dict[Monomial, Scalar], mode: str):
        if mode not in (RATIONAL, REAL):
            raise ValueError(f"unknown scalar mode {mode!r}")
        self.algebra = algebra
        self.coords = {m: c for m, c in sorted(coords.items(), key=lambda kv: kv[0].key()) if c != 0}
        self.mode = mode

    # -- plumbing -----------------------------------------------------------
    def _match(self, other: "WeilElement") -> None:
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise AlgebraMismatch("elements of different algebras")
        if self.mode != other.mode:
            raise ScalarModeError(f"mixed scalar modes {self.mode}/{other.mode}")

    def _zero_scalar(self) -> Scalar:
        return Fraction(0) if self.mode == RATIONAL else 0.0

    def _one_scalar(self) -> Scalar:
        return Fraction(1) if self.mode == RATIONAL else 1.0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeilElement)
            and self.mode == other.mode
            and self.algebra == other.algebra
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash((self.algebra, self.mode, tuple(self.coords.items())))

    def __repr__(self) -> str:
        return f"<{self.format()} in {self.algebra!r}>"

    def format(self) -> str:
        if not self.coords:
            return "0"
        names = self.algebra.names
        chunks: List[str] = []
        for mono, c in self.coords.items():
            mono_s = mono.format(names)
            if mono_s == "1":
                body = str(c)
            elif c == 1:
                body = mono_s
            elif c == -1:
                body = f"-{mono_s}"
            else:
                body = f"{c}*{mono_s}"
            if not chunks:
                chunks.append(body)
            elif body.startswith("-"):
                chunks.append(f"- {body[1:]}")
            else:
                chunks.append(f"+ {body}")
        return " ".join(chunks)

    # -- linear structure ----------------------------------------------------
    def add(self, other: "WeilElement") -> "WeilElement":
        self._match(other)
        acc = dict(self.coords)
        for mono, c in other.coords.items():
            s = acc.get(mono, self._zero_scalar()) + c
            if s != 0:
                acc[mono] = s
            else:
                acc.pop(mono, None)
        return WeilElement(self.algebra, acc, self.mode)

    def neg(self) -> "WeilElement":
        return WeilElement(self.algebra, {m: -c for m, c in self.coords.items()}, self.mode)

    def sub(self, other: "WeilElement") -> "WeilElement":
        return self.add(other.neg())

    def scale(self, factor: Scalar) -> "WeilElement":
        if self.mode == RATIONAL:
            if isinstance(factor, float):
                raise ScalarModeError("float factor in rational mode")
            f: Scalar = Fraction(factor)
        else:
            f = float(factor)
        if f == 0:
            return self.algebra.zero(self.mode)
        return WeilElement(self.algebra, {m: c * f for m, c in self.coords.items()}, self.mode)

    __add__ = add
    __sub__ = sub

    def __neg__(self) -> "WeilElement":
        return self.neg()

    # -- multiplicative structure ----------------------------------------------
    def mul(self, other: "WeilElement") -> "WeilElement":
        self._match(other)
        table = self.algebra.basis_product
        acc: Dict[Monomial, Scalar] = {}
        zero = self._zero_scalar()
        for m1, c1 in self.coords.items():
            for m2, c2 in other.coords.items():
                c = c1 * c2
                for mono, f in table(m1, m2):
                    s = acc.get(mono, zero) + c * f
                    if s != 0:
                        acc[mono] = s
                    else:
                        acc.pop(mono, None)
        return WeilElement(self.algebra, acc, self.mode)

    __mul__ = mul

    def pow_int(self, exponent: int) -> "WeilElement":
        if exponent < 0:
            return self.inverse().pow_int(-exponent)
        result = self.algebra.one(self.mode)
        for _ in range(exponent):
            result = result.mul(self)
        return result

    def augmentation(self) -> Scalar:
        return self.coords.get(unit_monomial(self.algebra.nvars), self._zero_scalar())

    def nilpotent_part(self) -> "WeilElement":
        return self.sub(self.algebra.const(self.augmentation(), self.mode))

    def is_nilpotent(self) -> bool:
        return self.augmentation() == 0

    def inverse(self) -> "WeilElement":
        """Multiplicative inverse via the finite geometric series; the
        augmentation must be nonzero."""
        a0 = self.augmentation()
        if a0 == 0:
            raise DomainError("element with zero augmentation is not invertible")
        inv_a0 = (Fraction(1) / a0) if self.mode == RATIONAL else (1.0 / a0)
        u = self.nilpotent_part().scale(-inv_a0)
        acc = self.algebra.one(self.mode)
        term = self.algebra.one(self.mode)
        for _ in range(1, self.algebra.order):
            term = term.mul(u)
            if not term.coords:
                break
            acc = acc.add(term)
        return acc.scale(inv_a0)

    def to_real(self) -> "WeilElement":
        if self.mode == REAL:
            return self
        return WeilElement(
            self.algebra, {m: float(c) for m, c in self.coords.items()}, REAL
        )

    def as_polynomial(self) -> Polynomial:
        """Canonical polynomial representative (rational mode only)."""
        if self.mode != RATIONAL:
            raise ScalarModeError("no exact representative for a float element")
        return Polynomial(self.algebra.nvars, dict(self.coords))


def scalars_close(a: Scalar, b: Scalar, rel: float = 1e-9, abs_tol: float = 1e-12) -> bool:
    x, y = float(a), float(b)
    return abs(x - y) <= max(abs_tol, rel * max(abs(x), abs(y)))


def elements_close(a: WeilElement, b: WeilElement, rel: float = 1e-9, abs_tol: float = 1e-12) -> bool:
    """Tolerant coordinatewise comparison (modes may differ)."""
    if a.algebra != b.algebra:
        raise AlgebraMismatch("elements of different algebras")
    zero = 0.0
    for mono in set(a.coords) | set(b.coords):
        if not scalars_close(
            a.coords.get(mono, zero), b.coords.get(mono, zero), rel, abs_tol
        ):
            return False
    return True


# ---------------------------------------------------------------------------
# Construction entry points and presets


def mk_weil_algebra(presentation: WeilPresentation) -> WeilAlgebra:
    """Parse and validate a presentation; raises ParseError on grammar
    violations and ImproperIdeal when the quotient would be zero."""
    relations = [
        parse_polynomial(text, presentation.variables) for text in presentation.relations
    ]
    return WeilAlgebra(presentation.variables, relations, presentation.nilpotency)


PRESETS: Dict[str, WeilPresentation] = {
    "dual": WeilPresentation(("x",), ("x^2",), 2),
    "jet2": WeilPresentation(("t",), ("t^3",), 3),
    "jet3": WeilPresentation(("t",), ("t^4",), 4),
    "d2": WeilPresentation(("x", "y"), ("x^2", "y^2", "x*y"), 2),
}


def preset_algebra(name: str) -> WeilAlgebra:
    if name not in PRESETS:
        raise ParseError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    return mk_weil_algebra(PRESETS[name])


def jet_algebra(order: int) -> WeilAlgebra:
    """R[t]/(t^(order+1)): the one-variable jet algebra of the given order."""
    if order < 1:
        raise ValueError("jet order must be >= 1")
    return mk_weil_algebra(
        WeilPresentation(("t",), (f"t^{order + 1}",), order + 1)
    )


def real_line_algebra() -> WeilAlgebra:
    """The 0-variable algebra R (unit for the tensor product)."""
    return WeilAlgebra((), (), 1)


# ---------------------------------------------------------------------------
# Morphisms


class WeilMorphism:
    """Algebra map represented by substitution data psibar: one target
    polynomial per source variable."""

    __slots__ = ("source", "target", "psibar", "_action")

    def __init__(self, source: WeilAlgebra, target: WeilAlgebra, psibar: Sequence[Polynomial]):
        self.source = source
        self.target = target
        self.psibar = tuple(psibar)
        self._action: Dict[Monomial, WeilElement] = {}
        self._validate()
        self._build_action()

    def _validate(self) -> None:
        if len(self.psibar) != self.source.nvars:
            raise AlgebraMismatch(
                f"psibar must have {self.source.nvars} components, got {len(self.psibar)}"
            )
        for i, p in enumerate(self.psibar):
            if p.nvars != self.target.nvars:
                raise AlgebraMismatch(f"psibar component {i} has wrong arity")
            if p.constant_term() != 0:
                raise BasePointViolation(
                    f"psibar component {i} has nonzero constant term"
                )
        for gen in self.source.ideal_generators():
            image = gen.substitute(list(self.psibar), self.target.order)
            if not self.target.reduction.normal_form(image).is_zero():
                raise IdealViolation(
                    f"generator {gen.format(self.source.names)} does not map into the target ideal"
                )

    def _build_action(self) -> None:
        for mono in self.source.basis:
            rep = from_monomial(mono).substitute(list(self.psibar), self.target.order)
            self._action[mono] = self.target.from_polynomial(rep)

    def apply(self, element: WeilElement) -> WeilElement:
        if element.algebra != self.source:
            raise AlgebraMismatch("element does not belong to the morphism's source")
        mode = element.mode
        acc = self.target.zero(mode)
        for mono, c in element.coords.items():
            image = self._action[mono]
            if mode == REAL:
                image = image.to_real()
            acc = acc.add(image.scale(c))
        return acc

    def compose(self, then: "WeilMorphism") -> "WeilMorphism":
        """The composite algebra map self.source -> then.target
        (apply self first, then ``then``); requires self.target == then.source."""
        if self.target != then.source:
            raise AlgebraMismatch("morphisms are not composable")
        new_psibar = [
            p.substitute(list(then.psibar), then.target.order) for p in self.psibar
        ]
        return WeilMorphism(self.source, then.target, new_psibar)

    def acts_same(self, other: "WeilMorphism") -> bool:
        """Action-level equality: same source/target and the same image
        for every quotient-basis element."""
        if self.source != other.source or self.target != other.target:
            return False
        return all(self._action[m] == other._action[m] for m in self.source.basis)

    def __eq__(self, other: object) -> bool:
        """Representative-level equality of the substitution data."""
        return (
            isinstance(other, WeilMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.psibar == other.psibar
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.psibar))

    def __repr__(self) -> str:
        comps = ", ".join(p.format(self.target.names) for p in self.psibar)
        return f"WeilMorphism([{comps}])"


def mk_morphism(
    source: WeilAlgebra, target: WeilAlgebra, psibar: Sequence[Polynomial]
) -> WeilMorphism:
    return WeilMorphism(source, target, psibar)


def identity_morphism(algebra: WeilAlgebra) -> WeilMorphism:
    psibar = [
        from_monomial(var_monomial(algebra.nvars, i)) for i in range(algebra.nvars)
    ]
    return WeilMorphism(algebra, algebra, psibar)


def zero_morphism(source: WeilAlgebra, target: WeilAlgebra) -> WeilMorphism:
    """The augmentation-through-zero morphism (all psibar components 0)."""
    psibar = [Polynomial(target.nvars) for _ in range(source.nvars)]
    return WeilMorphism(source, target, psibar)


def apply_morphism(morphism: WeilMorphism, element: WeilElement) -> WeilElement:
    return morphism.apply(element)


def compose_morphism(first: WeilMorphism, second: WeilMorphism) -> WeilMorphism:
    """Composite of ``first`` followed by ``second``."""
    return first.compose(second)


# ---------------------------------------------------------------------------
# Tensor products


def _tensor_names(total: int) -> Tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(total))


def tensor(w1: WeilAlgebra, w2: WeilAlgebra) -> WeilAlgebra:
    """Tensor product, presented on the disjoint union of variable blocks
    (renamed positionally to x1..xN) with nilpotency k1 + k2 - 1.

    The relation list carries each factor's full ideal generator set —
    presented relations plus that factor's degree-k monomial witnesses —
    so the construction is the algebra tensor product on the nose and
    the dimension law dim(T) = dim(W1) * dim(W2) holds.
    """
    total = w1.nvars + w2.nvars
    relations: List[Polynomial] = []
    for gen in w1.ideal_generators():
        relations.append(embed_poly(gen, total, 0))
    for gen in w2.ideal_generators():
        relations.append(embed_poly(gen, total, w1.nvars))
    return WeilAlgebra(_tensor_names(total), relations, w1.order + w2.order - 1)


def tensor_inclusions(
    w1: WeilAlgebra, w2: WeilAlgebra, t: WeilAlgebra | None = None
) -> Tuple[WeilMorphism, WeilMorphism]:
    """The two canonical inclusion morphisms W1 -> T and W2 -> T."""
    if t is None:
        t = tensor(w1, w2)
    total = t.nvars
    left = WeilMorphism(
        w1, t, [from_monomial(var_monomial(total, i)) for i in range(w1.nvars)]
    )
    right = WeilMorphism(
        w2,
        t,
        [from_monomial(var_monomial(total, w1.nvars + j)) for j in range(w2.nvars)],
    )
    return left, right


def tensor_pair(
    w1: WeilAlgebra,
    w2: WeilAlgebra,
    a: WeilElement,
    b: WeilElement,
    t: WeilAlgebra | None = None,
) -> WeilElement:
    """The bilinear map (a, b) -> a*b into the tensor product, computed by
    basis bookkeeping: the product of two factor basis monomials is itself
    a basis monomial of T."""
    if a.algebra != w1 or b.algebra != w2:
        raise AlgebraMismatch("tensor_pair arguments do not match the factors")
    if a.mode != b.mode:
        raise ScalarModeError("mixed scalar modes in tensor_pair")
    if t is None:
        t = tensor(w1, w2)
    total = t.nvars
    coords: Dict[Monomial, Scalar] = {}
    for m1, c1 in a.coords.items():
        left = embed_poly(from_monomial(m1), total, 0)
        lm = next(iter(left.terms))
        for m2, c2 in b.coords.items():
            rm = next(iter(embed_poly(from_monomial(m2), total, w1.nvars).terms))
            coords[lm.mul(rm)] = c1 * c2
    return t.element(coords, a.mode)


def tensor_morphism(
    psi1: WeilMorphism, psi2: WeilMorphism, source: WeilAlgebra | None = None, target: WeilAlgebra | None = None
) -> WeilMorphism:
    """psi1 (x) psi2 : tensor(src1, src2) -> tensor(tgt1, tgt2)."""
    if source is None:
        source = tensor(psi1.source, psi2.source)
    if target is None:
        target = tensor(psi1.target, psi2.target)
    total = target.nvars
    psibar: List[Polynomial] = []
    for p in psi1.psibar:
        psibar.append(embed_poly(p, total, 0))
    for p in psi2.psibar:
        psibar.append(embed_poly(p, total, psi1.target.nvars))
    return WeilMorphism(source, target, psibar)
