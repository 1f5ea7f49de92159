"""
Polynomial algebra

Prime fields, monomial orders, G-graded polynomial rings, polynomials and
elements of graded free modules. Scalars are plain ints in [0, p); monomials
are exponent tuples; module terms are (position, exponents) pairs.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import GF, Poly, Rational, Symbol, isprime
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .exceptions import (
    AmbientMismatch,
    BasymError,
    ExponentOverflow,
    InhomogeneousElement,
    PositivityError,
    SessionSyntaxError,
    UndefinedDegree,
)
from .grading import Degree, DegreeGroup, PositivityFunctional

logger = logging.getLogger(__name__)

MAX_EXPONENT = 2**31 - 1

Exponents = Tuple[int, ...]
Term = Tuple[int, Exponents]


class PrimeField:
    """The field F_p; elements are ints in [0, p)"""

    def __init__(self, characteristic: int = 32003):
        characteristic = int(characteristic)
        if not isprime(characteristic):
            raise BasymError(f"Field characteristic must be prime, got {characteristic}")
        self.characteristic = characteristic
        self.domain = GF(characteristic)

    def __call__(self, value) -> int:
        p = self.characteristic
        if isinstance(value, Rational):
            value = Fraction(int(value.p), int(value.q))
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
            if den % p == 0:
                raise BasymError(f"Denominator {den} vanishes in characteristic {p}")
            return num * pow(den, -1, p) % p
        return int(value) % p

    def inv(self, a: int) -> int:
        if a % self.characteristic == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.characteristic)

    def symmetric(self, a: int) -> int:
        """Representative in (-p/2, p/2]"""
        p = self.characteristic
        a %= p
        return a - p if a > p // 2 else a

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("PrimeField", self.characteristic))

    def __repr__(self) -> str:
        return f"GF({self.characteristic})"


@lru_cache(maxsize=None)
def _grevlex(exps: Exponents) -> Tuple[int, ...]:
    return (sum(exps),) + tuple(-a for a in reversed(exps))


@lru_cache(maxsize=None)
def _term_key(kind: str, block: Tuple[int, ...], exps: Exponents) -> Tuple[int, ...]:
    if kind == "grevlex":
        return _grevlex(exps)
    if kind == "lex":
        return exps
    inside = tuple(exps[i] for i in block)
    outside = tuple(a for i, a in enumerate(exps) if i not in block)
    return _grevlex(inside) + _grevlex(outside)


@dataclass(frozen=True)
class MonomialOrder:
    """
    Monomial order on a ring, extended to free modules.

    kind is ``grevlex``, ``lex`` or ``elimination`` (grevlex on ``block``
    first, then grevlex on the remaining variables). The module extension is
    ``top`` (term over position) or ``pot`` (position over term); in both,
    e_1 > e_2 > ... .
    """

    kind: str = "grevlex"
    block: Tuple[int, ...] = ()
    module_extension: str = "top"

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elimination"):
            raise BasymError(f"Unknown monomial order '{self.kind}'")
        if self.module_extension not in ("top", "pot"):
            raise BasymError(f"Unknown module extension '{self.module_extension}'")
        object.__setattr__(self, "block", tuple(sorted(int(i) for i in self.block)))

    @classmethod
    def elimination(cls, block: Iterable[int], module_extension: str = "top") -> "MonomialOrder":
        return cls("elimination", tuple(block), module_extension)

    def term_key(self, exps: Exponents) -> Tuple[int, ...]:
        return _term_key(self.kind, self.block, exps)

    def key(self, term: Term) -> Tuple[int, ...]:
        """Sort key of a module term; larger key means larger term"""
        pos, exps = term
        if self.module_extension == "top":
            return _term_key(self.kind, self.block, exps) + (-pos,)
        return (-pos,) + _term_key(self.kind, self.block, exps)

    def compare(self, u: Union[Exponents, Term], v: Union[Exponents, Term]) -> int:
        """-1, 0 or 1 as u <, ==, > v; accepts exponent tuples or module terms"""
        if _is_term(u) != _is_term(v):
            raise AmbientMismatch("Cannot compare a ring monomial with a module term")
        ku = self.key(u) if _is_term(u) else self.term_key(u)
        kv = self.key(v) if _is_term(v) else self.term_key(v)
        return (ku > kv) - (ku < kv)

    def to_text(self) -> str:
        if self.kind == "elimination":
            return f"elimination({','.join(str(i) for i in self.block)})"
        return self.kind


def _is_term(x) -> bool:
    return len(x) == 2 and isinstance(x[1], tuple)


def _check_exponents(exps: Exponents) -> Exponents:
    for a in exps:
        if a < 0:
            raise BasymError(f"Negative exponent in {exps}")
        if a > MAX_EXPONENT:
            raise ExponentOverflow(f"Exponent {a} exceeds {MAX_EXPONENT}")
    return exps


class Ring:
    """
    Polynomial ring k[x_1..x_n] graded by a finitely generated abelian group.

    Rings compare by value, so elements built in equal rings interoperate.
    """

    def __init__(
        self,
        names: Sequence[str],
        degrees: Sequence[Union[Degree, int, Sequence[int]]],
        group: Optional[DegreeGroup] = None,
        phi: Optional[PositivityFunctional] = None,
        characteristic: int = 32003,
        order: Optional[MonomialOrder] = None,
        check_positivity: bool = True,
    ):
        names = tuple(str(n) for n in names)
        if len(set(names)) != len(names):
            raise BasymError(f"Duplicate variable names in {names}")
        if len(names) != len(degrees):
            raise BasymError(f"{len(names)} variables but {len(degrees)} degrees")
        for name in names:
            if not name.isidentifier():
                raise BasymError(f"Invalid variable name '{name}'")

        if group is None:
            group = next((d.group for d in degrees if isinstance(d, Degree)), DegreeGroup(1))
        self.group = group
        self.degrees: Tuple[Degree, ...] = tuple(_as_degree(group, d) for d in degrees)
        self.names = names
        self.nvars = len(names)
        self.index = {name: i for i, name in enumerate(names)}
        self.phi = phi if phi is not None else PositivityFunctional.default(group)
        self.field = PrimeField(characteristic)
        self.characteristic = self.field.characteristic
        self.order = order or MonomialOrder()
        self.positive = check_positivity

        if check_positivity:
            for name, d in zip(names, self.degrees):
                if self.phi(d) <= 0:
                    raise PositivityError(
                        f"Positivity functional {[str(w) for w in self.phi.weights]} "
                        f"is not positive on deg {name} = {d}"
                    )

        self._var_coords = tuple(d.coordinates() for d in self.degrees)
        self._degree_cache: Dict[Exponents, Degree] = {}
        self._key = (
            self.names,
            self.degrees,
            self.phi.weights,
            self.characteristic,
            self.order,
        )

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, Ring) and self._key == other._key)

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        vars_ = " ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"Ring({vars_}; {self.group}; GF({self.characteristic}))"

    def with_order(self, order: MonomialOrder) -> "Ring":
        return Ring(
            self.names,
            self.degrees,
            self.group,
            self.phi,
            self.characteristic,
            order,
            self.positive,
        )

    # Monomials

    def monomial_degree(self, exps: Exponents) -> Degree:
        degree = self._degree_cache.get(exps)
        if degree is None:
            coords = [0] * self.group.length
            for a, vc in zip(exps, self._var_coords):
                if a:
                    for k, c in enumerate(vc):
                        coords[k] += a * c
            degree = self.group.degree(coords)
            self._degree_cache[exps] = degree
        return degree

    def zero_exponents(self) -> Exponents:
        return (0,) * self.nvars

    def monomial_text(self, exps: Exponents) -> str:
        parts = []
        for name, a in zip(self.names, exps):
            if a == 1:
                parts.append(name)
            elif a > 1:
                parts.append(f"{name}^{a}")
        return "*".join(parts) or "1"

    # Elements

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {self.zero_exponents(): self.field(c)})

    def monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        exps = _check_exponents(tuple(int(a) for a in exps))
        if len(exps) != self.nvars:
            raise AmbientMismatch(f"Exponent vector {exps} does not fit {self}")
        return Polynomial(self, {exps: self.field(c)})

    def var(self, name: str) -> "Polynomial":
        if name not in self.index:
            raise AmbientMismatch(f"Unknown variable '{name}' in {self}")
        exps = [0] * self.nvars
        exps[self.index[name]] = 1
        return self.monomial(exps)

    @property
    def gens(self) -> List["Polynomial"]:
        return [self.var(n) for n in self.names]

    def free_module(self, shifts: Sequence[Degree]) -> "GradedFreeModule":
        return GradedFreeModule(self, shifts)

    def ideal_module(self) -> "GradedFreeModule":
        """R itself as a rank-one free module generated in degree 0"""
        return GradedFreeModule(self, [self.group.zero()])

    def parse(self, text: str, line: int = 1, column: int = 1) -> "Polynomial":
        """Parse ``3*x^2*y - z``; failures raise SessionSyntaxError at (line, column)"""
        return parse_polynomial(self, text, line, column)

    def to_dict(self) -> Dict:
        return {
            "variables": list(self.names),
            "degrees": [d.to_list() for d in self.degrees],
            "group": self.group.to_dict(),
            "phi": [str(w) for w in self.phi.weights],
            "characteristic": self.characteristic,
            "order": self.order.to_text(),
        }


def _as_degree(group: DegreeGroup, value) -> Degree:
    if isinstance(value, Degree):
        value.require_group(group)
        return value
    if isinstance(value, int):
        return group.degree(value)
    return group.degree(tuple(value))


class Polynomial:
    """Polynomial with coefficients in F_p; treated as immutable"""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Dict[Exponents, int]):
        p = ring.characteristic
        self.ring = ring
        self.terms = {e: c % p for e, c in terms.items() if c % p}

    def _require(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise AmbientMismatch(f"{self.ring} and {other.ring} differ")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == self.ring.constant(other)
        return isinstance(other, Polynomial) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "Polynomial":
        if isinstance(other, int):
            other = self.ring.constant(other)
        self._require(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FreeModuleElement):
            return other.__rmul__(self)
        if isinstance(other, int):
            return Polynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        self._require(other)
        p = self.ring.characteristic
        terms: Dict[Exponents, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = (terms.get(e, 0) + c1 * c2) % p
        if terms and max(max(e, default=0) for e in terms) > MAX_EXPONENT:
            raise ExponentOverflow(f"Product of {self} and {other} overflows exponents")
        return Polynomial(self.ring, terms)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise BasymError("Negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, exps: Exponents, c: int = 1) -> "Polynomial":
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self.terms.items()},
        )

    def sorted_terms(self) -> List[Tuple[Exponents, int]]:
        """Terms in descending ring order"""
        order = self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.term_key(t[0]), reverse=True)

    def lead_exponents(self) -> Exponents:
        if not self.terms:
            raise UndefinedDegree("The zero polynomial has no lead term")
        order = self.ring.order
        return max(self.terms, key=order.term_key)

    def lead_coefficient(self) -> int:
        return self.terms[self.lead_exponents()]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        inv = self.ring.field.inv(self.lead_coefficient())
        return self * inv

    def variables(self) -> Tuple[int, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return tuple(sorted(used))

    def as_element(self, module: Optional["GradedFreeModule"] = None) -> "FreeModuleElement":
        module = module or self.ring.ideal_module()
        if module.rank != 1:
            raise AmbientMismatch("A polynomial embeds only into a rank-one module")
        return FreeModuleElement(module, {(0, e): c for e, c in self.terms.items()})

    def degree(self) -> Degree:
        return homogeneous_degree(self)

    def __str__(self) -> str:
        return format_terms(
            self.ring, [(self.ring.monomial_text(e), c) for e, c in self.sorted_terms()]
        )

    __repr__ = __str__


def format_terms(ring: Ring, terms: Sequence[Tuple[str, int]]) -> str:
    """Join (monomial text, coefficient) pairs with symmetric coefficients"""
    if not terms:
        return "0"
    out = []
    for k, (mono, c) in enumerate(terms):
        c = ring.field.symmetric(c)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if mono == "1":
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        if k == 0:
            out.append(f"-{body}" if sign == "-" else body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


class GradedFreeModule:
    """F = sum R(-shift_i); basis element i has degree shifts[i]"""

    def __init__(self, ring: Ring, shifts: Sequence[Degree]):
        self.ring = ring
        self.shifts: Tuple[Degree, ...] = tuple(_as_degree(ring.group, d) for d in shifts)
        self.rank = len(self.shifts)
        self._degree_cache: Dict[Term, Degree] = {}

    def __eq__(self, other) -> bool:
        return self is other or (
            isinstance(other, GradedFreeModule)
            and self.ring == other.ring
            and self.shifts == other.shifts
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.shifts))

    def __repr__(self) -> str:
        return f"GradedFreeModule(rank={self.rank}, shifts={[str(d) for d in self.shifts]})"

    def term_degree(self, term: Term) -> Degree:
        degree = self._degree_cache.get(term)
        if degree is None:
            pos, exps = term
            degree = self.shifts[pos] + self.ring.monomial_degree(exps)
            self._degree_cache[term] = degree
        return degree

    def zero(self) -> "FreeModuleElement":
        return FreeModuleElement(self, {})

    def basis(self, i: int, c: int = 1) -> "FreeModuleElement":
        return FreeModuleElement(self, {(i, self.ring.zero_exponents()): c})

    def from_polynomials(self, entries: Sequence[Polynomial]) -> "FreeModuleElement":
        if len(entries) != self.rank:
            raise AmbientMismatch(f"{len(entries)} entries for a rank {self.rank} module")
        terms = {}
        for pos, f in enumerate(entries):
            if isinstance(f, int):
                f = self.ring.constant(f)
            if f.ring != self.ring:
                raise AmbientMismatch(f"Entry {f} lives in another ring")
            terms.update({(pos, e): c for e, c in f.terms.items()})
        return FreeModuleElement(self, terms)

    def with_ring(self, ring: Ring) -> "GradedFreeModule":
        return GradedFreeModule(ring, self.shifts)

    def basis_of_degree(self, degree: Degree) -> List[Term]:
        """All module terms of the given degree"""
        out = []
        for pos, shift in enumerate(self.shifts):
            out.extend((pos, e) for e in monomials_of_degree(self.ring, degree - shift))
        return out


class FreeModuleElement:
    """Element of a graded free module; treated as immutable"""

    __slots__ = ("module", "terms")

    def __init__(self, module: GradedFreeModule, terms: Dict[Term, int]):
        p = module.ring.characteristic
        self.module = module
        self.terms = {t: c % p for t, c in terms.items() if c % p}

    @property
    def ring(self) -> Ring:
        return self.module.ring

    def _require(self, other: "FreeModuleElement") -> None:
        if self.module != other.module:
            raise AmbientMismatch(f"{self.module} and {other.module} differ")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FreeModuleElement)
            and self.module == other.module
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "FreeModuleElement") -> "FreeModuleElement":
        self._require(other)
        terms = dict(self.terms)
        for t, c in other.terms.items():
            terms[t] = terms.get(t, 0) + c
        return FreeModuleElement(self.module, terms)

    def __neg__(self) -> "FreeModuleElement":
        return FreeModuleElement(self.module, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "FreeModuleElement") -> "FreeModuleElement":
        return self + (-other)

    def __rmul__(self, other) -> "FreeModuleElement":
        if isinstance(other, int):
            return FreeModuleElement(self.module, {t: c * other for t, c in self.terms.items()})
        if not isinstance(other, Polynomial) or other.ring != self.ring:
            raise AmbientMismatch("Module elements scale by polynomials of their own ring")
        p = self.ring.characteristic
        terms: Dict[Term, int] = {}
        for e1, c1 in other.terms.items():
            for (pos, e2), c2 in self.terms.items():
                t = (pos, tuple(a + b for a, b in zip(e1, e2)))
                terms[t] = (terms.get(t, 0) + c1 * c2) % p
        return FreeModuleElement(self.module, terms)

    __mul__ = __rmul__

    def mul_term(self, exps: Exponents, c: int = 1) -> "FreeModuleElement":
        return FreeModuleElement(
            self.module,
            {(pos, tuple(a + b for a, b in zip(e, exps))): v * c for (pos, e), v in self.terms.items()},
        )

    def component(self, pos: int) -> Polynomial:
        return Polynomial(self.ring, {e: c for (q, e), c in self.terms.items() if q == pos})

    def components(self) -> List[Polynomial]:
        return [self.component(i) for i in range(self.module.rank)]

    def sorted_terms(self) -> List[Tuple[Term, int]]:
        order = self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def lead_term(self) -> Term:
        if not self.terms:
            raise UndefinedDegree("The zero element has no lead term")
        return max(self.terms, key=self.ring.order.key)

    def lead_coefficient(self) -> int:
        return self.terms[self.lead_term()]

    def monic(self) -> "FreeModuleElement":
        if not self.terms:
            return self
        return self.ring.field.inv(self.lead_coefficient()) * self

    def degree(self) -> Degree:
        return homogeneous_degree(self)

    def __str__(self) -> str:
        return "[" + ", ".join(str(f) for f in self.components()) + "]"

    __repr__ = __str__


Element = Union[Polynomial, FreeModuleElement]


def homogeneous_degree(f: Element) -> Degree:
    """Common degree of all terms of f, including basis shifts"""
    if not f.terms:
        raise UndefinedDegree("The zero element has no degree")
    if isinstance(f, Polynomial):
        degree_of = f.ring.monomial_degree
        text = f.ring.monomial_text
    else:
        degree_of = f.module.term_degree
        text = lambda t: f"{f.ring.monomial_text(t[1])}*e{t[0] + 1}"  # noqa: E731

    items = iter(f.terms)
    first = next(items)
    degree = degree_of(first)
    for t in items:
        other = degree_of(t)
        if other != degree:
            raise InhomogeneousElement(
                f"Terms {text(first)} (degree {degree}) and {text(t)} (degree {other}) "
                f"of {f} disagree",
                witnesses=(text(first), text(t)),
            )
    return degree


def is_homogeneous(f: Element) -> bool:
    try:
        homogeneous_degree(f)
    except InhomogeneousElement:
        return False
    return True


def _integral_weights(ring: Ring) -> Tuple[Tuple[int, ...], int]:
    weights = [ring.phi(d) for d in ring.degrees]
    scale = lcm(*[w.denominator for w in weights]) if weights else 1
    return tuple(int(w * scale) for w in weights), scale


@lru_cache(maxsize=4096)
def monomials_of_degree(ring: Ring, degree: Degree) -> Tuple[Exponents, ...]:
    """Every monomial of the given degree, in descending ring order"""
    if not ring.positive:
        raise PositivityError("Degree pieces are only finite for positively graded rings")
    degree.require_group(ring.group)
    weights, scale = _integral_weights(ring)
    target = ring.phi(degree) * scale
    if target < 0 or target.denominator != 1:
        return ()
    target = int(target)

    found: List[Exponents] = []
    exps = [0] * ring.nvars

    def walk(i: int, remaining: int) -> None:
        if i == ring.nvars:
            if remaining == 0:
                e = tuple(exps)
                if ring.monomial_degree(e) == degree:
                    found.append(e)
            return
        w = weights[i]
        for a in range(remaining // w + 1):
            exps[i] = a
            walk(i + 1, remaining - a * w)
        exps[i] = 0

    walk(0, target)
    found.sort(key=ring.order.term_key, reverse=True)
    return tuple(found)


def transfer(f: Element, target):
    """
    Move an element into another ring (or free module over it) by variable
    name. Variables missing from the target are sent to zero.
    """
    if isinstance(f, Polynomial):
        ring = target
        source = f.ring
    else:
        ring = target.ring
        source = f.ring
        if target.rank != f.module.rank:
            raise AmbientMismatch(f"Cannot move a rank {f.module.rank} element into {target}")

    mapping = [ring.index.get(name) for name in source.names]

    def move(exps: Exponents) -> Optional[Exponents]:
        out = [0] * ring.nvars
        for i, a in enumerate(exps):
            if a:
                j = mapping[i]
                if j is None:
                    return None
                out[j] = a
        return tuple(out)

    if isinstance(f, Polynomial):
        terms = {}
        for e, c in f.terms.items():
            moved = move(e)
            if moved is not None:
                terms[moved] = c
        return Polynomial(ring, terms)

    terms = {}
    for (pos, e), c in f.terms.items():
        moved = move(e)
        if moved is not None:
            terms[(pos, moved)] = c
    return FreeModuleElement(target, terms)


def substitute(f: Polynomial, target: Ring, images: Dict[str, Polynomial]) -> Polynomial:
    """Ring map sending each variable to its image (default: same-named variable)"""
    result = target.zero()
    powers: Dict[Tuple[int, int], Polynomial] = {}

    def image_power(i: int, a: int) -> Polynomial:
        key = (i, a)
        if key not in powers:
            name = f.ring.names[i]
            base = images[name] if name in images else target.var(name)
            powers[key] = base**a
        return powers[key]

    for e, c in f.terms.items():
        term = target.constant(c)
        for i, a in enumerate(e):
            if a:
                term = term * image_power(i, a)
        result = result + term
    return result


_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_POLYNOMIAL_TEXT = re.compile(r"^[A-Za-z0-9_\s+\-*^/().]*$")
_IDENTIFIER = re.compile(r"[A-Za-z_]\w*")


def _check_text(ring: Ring, text: str, line: int, column: int) -> None:
    """Only ring variables, integers and arithmetic may reach parse_expr, which evaluates its input"""
    if not _POLYNOMIAL_TEXT.match(text):
        raise SessionSyntaxError(f"unexpected characters in polynomial '{text.strip()}'", line, column)
    unknown = sorted(set(_IDENTIFIER.findall(text)) - set(ring.names))
    if unknown:
        raise SessionSyntaxError(f"unknown variables {unknown} in '{text.strip()}'", line, column)


def parse_polynomial(ring: Ring, text: str, line: int = 1, column: int = 1) -> Polynomial:
    _check_text(ring, text, line, column)
    symbols = {name: Symbol(name) for name in ring.names}
    try:
        expr = parse_expr(text, local_dict=symbols, transformations=_TRANSFORMATIONS)
    except Exception as exc:  # sympy raises a zoo of tokenizer/syntax errors
        raise SessionSyntaxError(f"cannot parse polynomial '{text.strip()}': {exc}", line, column)

    try:
        poly = Poly(expr, *[symbols[n] for n in ring.names])
    except Exception as exc:
        raise SessionSyntaxError(f"'{text.strip()}' is not a polynomial: {exc}", line, column)

    terms: Dict[Exponents, int] = {}
    try:
        for exps, coeff in poly.terms():
            terms[_check_exponents(tuple(int(a) for a in exps))] = ring.field(Rational(coeff))
    except BasymError as exc:
        raise SessionSyntaxError(str(exc), line, column)
    return Polynomial(ring, terms)
