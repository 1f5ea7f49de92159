"""
Stanley decompositions and supports

A Stanley decomposition writes a monomial quotient as a direct sum of pieces
u k[Z]. Splitting each k[Z] further by its toric degree ideal turns the
pieces into shifted free submonoids of the degree group, which describe the
support of any finitely generated graded module.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from sympy import Matrix

from .exceptions import AmbientMismatch, PositivityError
from .grading import Degree, PositivityFunctional, relation_lattice
from .groebner import eliminate
from .homalg import Presentation
from .polyalg import Exponents, GradedFreeModule, Polynomial, Ring, Term, monomials_of_degree, transfer

logger = logging.getLogger(__name__)


# Stanley decompositions


@dataclass(frozen=True)
class StanleySummand:
    """The piece u k[Z] at one position of a free module"""

    position: int
    monomial: Exponents
    variables: Tuple[int, ...]
    degree: Degree

    def text(self, ring: Ring) -> str:
        names = ",".join(ring.names[i] for i in self.variables)
        return f"{ring.monomial_text(self.monomial)}*e{self.position + 1}*k[{names}]"


class StanleyDecomposition:
    def __init__(self, module: GradedFreeModule, summands: Sequence[StanleySummand]):
        self.module = module
        self.summands: Tuple[StanleySummand, ...] = tuple(summands)

    def __len__(self) -> int:
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def dimension(self, degree: Degree) -> int:
        """Number of monomials of the given degree covered by the summands"""
        ring = self.module.ring
        total = 0
        for summand in self.summands:
            allowed = set(summand.variables)
            for e in monomials_of_degree(ring, degree - summand.degree):
                if all(a == 0 or i in allowed for i, a in enumerate(e)):
                    total += 1
        return total

    def to_dict(self) -> List[Dict]:
        ring = self.module.ring
        return [
            {
                "position": s.position,
                "monomial": ring.monomial_text(s.monomial),
                "variables": [ring.names[i] for i in s.variables],
                "degree": s.degree.to_list(),
            }
            for s in self.summands
        ]

    def __str__(self) -> str:
        ring = self.module.ring
        return " ++ ".join(s.text(ring) for s in self.summands) or "0"


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _minimal_monomials(gens: Iterable[Exponents]) -> List[Exponents]:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out: List[Exponents] = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def _colon(gens: Sequence[Exponents], u: Exponents) -> List[Exponents]:
    """Generators of (J : u) for a monomial ideal J"""
    return _minimal_monomials(tuple(max(a - b, 0) for a, b in zip(g, u)) for g in gens)


def _decompose(
    gens: Sequence[Exponents], nvars: int
) -> List[Tuple[Exponents, Tuple[int, ...]]]:
    """Pieces (u, Z) partitioning the standard monomials of k[x]/(gens)"""
    out: List[Tuple[Exponents, Tuple[int, ...]]] = []
    stack: List[Tuple[Exponents, FrozenSet[int]]] = [((0,) * nvars, frozenset(range(nvars)))]
    while stack:
        u, Z = stack.pop()
        inside = [
            g for g in _colon(gens, u) if all(a == 0 or i in Z for i, a in enumerate(g))
        ]
        if any(not any(g) for g in inside):
            continue
        if not inside:
            out.append((u, tuple(sorted(Z))))
            continue
        x = min(i for g in inside for i, a in enumerate(g) if a)
        with_x = tuple(a + (i == x) for i, a in enumerate(u))
        # Pushed in reverse so the x-free branch comes out first.
        stack.append((with_x, Z))
        stack.append((u, Z - {x}))
    return out


def stanley_decomposition(
    module: GradedFreeModule, leads: Iterable[Term]
) -> StanleyDecomposition:
    """
    Stanley decomposition of F / <leads> for monomial module terms ``leads``.

    The quotient is split recursively on the lowest-index variable that
    occurs in a minimal generator: monomials free of that variable, and
    monomials divisible by it.
    """
    ring = module.ring
    by_position: Dict[int, List[Exponents]] = {pos: [] for pos in range(module.rank)}
    for pos, e in leads:
        by_position[pos].append(e)
    summands = []
    for pos in range(module.rank):
        for u, Z in _decompose(_minimal_monomials(by_position[pos]), ring.nvars):
            summands.append(
                StanleySummand(pos, u, Z, module.shifts[pos] + ring.monomial_degree(u))
            )
    logger.debug("stanley decomposition: %d summands over rank %d", len(summands), module.rank)
    return StanleyDecomposition(module, summands)


# Toric degree ideals


def _binomial(ring: Ring, relation: Sequence[int]) -> Polynomial:
    plus = tuple(max(a, 0) for a in relation)
    minus = tuple(max(-a, 0) for a in relation)
    return ring.monomial(plus) - ring.monomial(minus)


def toric_degree_ideal(degrees: Sequence[Degree], ring: Optional[Ring] = None) -> List[Polynomial]:
    """
    Reduced Groebner basis of the ideal spanned by all T^a - T^b with
    deg T^a = deg T^b.

    Lattice-basis binomials are saturated by the product of all variables
    through an auxiliary variable y with y * prod(T) = 1.
    """
    degrees = tuple(degrees)
    if ring is None:
        ring = Ring([f"T{i + 1}" for i in range(len(degrees))], degrees, degrees[0].group if degrees else None)
    elif tuple(ring.degrees) != degrees:
        raise AmbientMismatch("The toric ring's variable degrees differ from the given degrees")

    lattice = relation_lattice(degrees)
    if not lattice:
        return []

    y = "y"
    while y in ring.index:
        y += "_"
    total = ring.group.zero()
    for d in degrees:
        total = total + d
    aux = Ring(
        ring.names + (y,),
        list(ring.degrees) + [-total],
        ring.group,
        ring.phi,
        ring.characteristic,
        check_positivity=False,
    )
    gens = [_binomial(aux, tuple(v) + (0,)) for v in lattice]
    gens.append(aux.monomial((1,) * aux.nvars) - aux.one())
    result = [transfer(g, ring) for g in eliminate(gens, [y])]
    logger.debug("toric ideal of %d degrees: %d binomials", len(degrees), len(result))
    return result


# Supports


@dataclass(frozen=True)
class SupportComponent:
    """The set shift + <generators>, for a free-independent tuple of generators"""

    shift: Degree
    generators: Tuple[Degree, ...]

    def contains(self, degree: Degree) -> bool:
        degree.require_group(self.shift.group)
        target = degree - self.shift
        if not self.generators:
            return target.is_zero()
        A = Matrix([list(g.free) for g in self.generators]).T
        b = Matrix(list(target.free))
        try:
            solution, params = A.gauss_jordan_solve(b)
        except ValueError:
            return False
        if params.shape[0]:
            raise AmbientMismatch(f"Generators {[str(g) for g in self.generators]} are not independent")
        coeffs = []
        for v in solution:
            if not v.is_integer or v < 0:
                return False
            coeffs.append(int(v))
        reached = self.shift
        for c, g in zip(coeffs, self.generators):
            reached = reached + c * g
        return reached == degree

    def elements(self, phi: PositivityFunctional, wcap) -> Set[Degree]:
        """All members of phi-weight at most wcap"""
        cap = Fraction(wcap)
        weights = [phi(g) for g in self.generators]
        if any(w <= 0 for w in weights):
            raise PositivityError("Cannot enumerate a monoid with a non-positive generator")
        found: Set[Degree] = set()

        def walk(i: int, current: Degree, weight: Fraction) -> None:
            if i == len(self.generators):
                found.add(current)
                return
            while weight <= cap:
                walk(i + 1, current, weight)
                current = current + self.generators[i]
                weight += weights[i]

        start = phi(self.shift)
        if start <= cap:
            walk(0, self.shift, start)
        return found

    def sort_key(self, phi: PositivityFunctional):
        return (phi(self.shift), self.shift.coordinates(), tuple(g.coordinates() for g in self.generators))

    def to_dict(self) -> Dict:
        return {"shift": self.shift.to_list(), "generators": [g.to_list() for g in self.generators]}

    def __str__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"{self.shift} + <{gens}>"


class SupportDecomposition:
    """A finite union of shifted free submonoids"""

    def __init__(self, phi: PositivityFunctional, components: Sequence[SupportComponent]):
        self.phi = phi
        self.components: Tuple[SupportComponent, ...] = tuple(components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def contains(self, degree: Degree) -> bool:
        return any(c.contains(degree) for c in self.components)

    def elements(self, wcap) -> Set[Degree]:
        out: Set[Degree] = set()
        for c in self.components:
            out |= c.elements(self.phi, wcap)
        return out

    def overlaps(self, wcap) -> List[Tuple[int, int]]:
        """Pairs of components sharing a degree of phi-weight at most wcap"""
        sets = [c.elements(self.phi, wcap) for c in self.components]
        return [
            (p, q)
            for p in range(len(sets))
            for q in range(p + 1, len(sets))
            if sets[p] & sets[q]
        ]

    def to_dict(self) -> List[Dict]:
        return [c.to_dict() for c in self.components]

    def __str__(self) -> str:
        return " u ".join(f"({c})" for c in self.components) or "{}"


def support_membership(d: SupportDecomposition, degree: Degree) -> bool:
    return d.contains(degree)


def toric_split(ring: Ring, variables: Sequence[int]) -> List[SupportComponent]:
    """supp k[Z] as a disjoint union of sigma_j + <E_j>, Z given by variable index"""
    variables = tuple(variables)
    if not variables:
        return [SupportComponent(ring.group.zero(), ())]
    sub = Ring(
        [ring.names[i] for i in variables],
        [ring.degrees[i] for i in variables],
        ring.group,
        ring.phi,
        ring.characteristic,
    )
    binomials = toric_degree_ideal(sub.degrees, sub)
    leads = [(0, g.lead_exponents()) for g in binomials]
    pieces = _decompose(_minimal_monomials(e for _, e in leads), sub.nvars)
    return [
        SupportComponent(sub.monomial_degree(u), tuple(sub.degrees[i] for i in Z))
        for u, Z in pieces
    ]


def _absorbed(c: SupportComponent, other: SupportComponent) -> bool:
    return set(c.generators) <= set(other.generators) and other.contains(c.shift)


def module_support_decomposition(presentation: Presentation) -> SupportDecomposition:
    """
    supp of F / K as a union of shifted free submonoids.

    in(K) gives a Stanley decomposition of F / in(K), which has the same
    support; each piece u k[Z] is then split by the toric ideal of Z.
    Components contained in another one are dropped.
    """
    ring = presentation.ring
    decomposition = stanley_decomposition(presentation.module, presentation.groebner.leads)

    splits: Dict[Tuple[int, ...], List[SupportComponent]] = {}
    found: List[SupportComponent] = []
    for summand in decomposition:
        if summand.variables not in splits:
            splits[summand.variables] = toric_split(ring, summand.variables)
        for piece in splits[summand.variables]:
            found.append(SupportComponent(summand.degree + piece.shift, piece.generators))

    unique = list(dict.fromkeys(found))
    kept = [
        c for c in unique if not any(o is not c and o != c and _absorbed(c, o) for o in unique)
    ]
    kept.sort(key=lambda c: c.sort_key(ring.phi))
    logger.debug(
        "support decomposition: %d summands, %d components, %d kept",
        len(decomposition),
        len(unique),
        len(kept),
    )
    return SupportDecomposition(ring.phi, kept)
