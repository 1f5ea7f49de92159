"""
Multi-Rees algebras and modules

A ReesSetup extends the base ring S by one variable T_{i,j} per generator
f_{i,j} of the ideal I_i, graded by G x Z^s. The Rees ideal and the Rees
module presentation come from eliminating auxiliary variables u_1..u_s; the
power functions are the direct per-t oracle.
"""
from __future__ import annotations

import itertools
import logging
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .exceptions import AmbientMismatch, BasymError, NegativePower, NotEquigenerated
from .grading import Degree, DegreeGroup
from .groebner import eliminate, eliminate_module, minimal_generators
from .homalg import Presentation, image_presentation
from .polyalg import FreeModuleElement, Polynomial, Ring, homogeneous_degree, transfer

logger = logging.getLogger(__name__)


def _fresh_names(prefix: str, count: int, taken: Sequence[str], blocks: Sequence[int] = ()) -> List[str]:
    """Variable names not clashing with ``taken``; ``blocks`` gives per-block sizes"""
    while True:
        if blocks and len(blocks) > 1:
            names = [f"{prefix}{i + 1}_{j + 1}" for i, r in enumerate(blocks) for j in range(r)]
        else:
            names = [f"{prefix}{j + 1}" for j in range(count)]
        if not set(names) & set(taken):
            return names
        prefix = prefix + "_"


class ReesSetup:
    """
    S, the ideals I_1..I_s and the extended ring R = S[T_{i,j}].

    deg T_{i,j} = (deg f_{i,j}, e_i) in G x Z^s, or (0, e_i) in shifted mode,
    which is only legal when every ideal is equigenerated.
    """

    def __init__(self, base: Ring, ideals: Sequence[Sequence[Polynomial]], shifted: bool = False):
        if not ideals:
            raise BasymError("A Rees setup needs at least one ideal")
        for i, gens in enumerate(ideals):
            if not gens:
                raise BasymError(f"Ideal {i + 1} has no generators")
            for f in gens:
                if f.ring != base:
                    raise AmbientMismatch(f"Generator {f} of ideal {i + 1} is not in the base ring")
                if f.is_zero():
                    raise BasymError(f"Ideal {i + 1} has a zero generator")

        self.base = base
        self.ideals: Tuple[Tuple[Polynomial, ...], ...] = tuple(tuple(g) for g in ideals)
        self.s = len(self.ideals)
        self.generator_degrees: Tuple[Tuple[Degree, ...], ...] = tuple(
            tuple(homogeneous_degree(f) for f in gens) for gens in self.ideals
        )
        self.equigenerated: Tuple[bool, ...] = tuple(len(set(ds)) == 1 for ds in self.generator_degrees)
        self.shifted = shifted

        if shifted and not all(self.equigenerated):
            bad = [i + 1 for i, ok in enumerate(self.equigenerated) if not ok]
            raise NotEquigenerated(
                f"Ideals {bad} are not equigenerated; the shifted grading needs one generator "
                f"degree per ideal. Use asymptotic_tor_shape for the general case."
            )

        self.group: DegreeGroup = base.group.extend(self.s)
        self.t_names = _fresh_names(
            "T", sum(len(g) for g in self.ideals), base.names, [len(g) for g in self.ideals]
        )
        self.u_names = _fresh_names("u", self.s, tuple(base.names) + tuple(self.t_names))
        self.blocks: Tuple[Tuple[str, ...], ...] = self._split_blocks(self.t_names)

    def _split_blocks(self, names: Sequence[str]) -> Tuple[Tuple[str, ...], ...]:
        out, k = [], 0
        for gens in self.ideals:
            out.append(tuple(names[k:k + len(gens)]))
            k += len(gens)
        return tuple(out)

    def unit(self, i: int) -> Tuple[int, ...]:
        return tuple(int(i == j) for j in range(self.s))

    @property
    def gammas(self) -> Tuple[Degree, ...]:
        """The common generator degree of each ideal"""
        if not all(self.equigenerated):
            raise NotEquigenerated("Only equigenerated ideals have a single generator degree")
        return tuple(ds[0] for ds in self.generator_degrees)

    def t_degrees(self, shifted: Optional[bool] = None) -> List[Degree]:
        shifted = self.shifted if shifted is None else shifted
        G = self.base.group
        out = []
        for i, ds in enumerate(self.generator_degrees):
            for d in ds:
                out.append(G.embed(G.zero() if shifted else d, self.unit(i)))
        return out

    def _extended_ring(self, shifted: bool) -> Ring:
        G = self.base.group
        degrees = [G.embed(d, (0,) * self.s) for d in self.base.degrees] + self.t_degrees(shifted)
        return Ring(
            self.base.names + tuple(self.t_names),
            degrees,
            self.group,
            self.base.phi.extend(self.s),
            self.base.characteristic,
        )

    @cached_property
    def ring(self) -> Ring:
        """R = S[T]"""
        return self._extended_ring(self.shifted)

    @cached_property
    def elimination_ring(self) -> Ring:
        """R[u] with deg u_i = (0, e_i), graded by the unshifted T-degrees"""
        G = self.base.group
        R = self._extended_ring(False)
        degrees = list(R.degrees) + [G.embed(G.zero(), self.unit(i)) for i in range(self.s)]
        return Ring(
            R.names + tuple(self.u_names),
            degrees,
            self.group,
            R.phi,
            R.characteristic,
        )

    @cached_property
    def fiber_ring(self) -> Ring:
        """B = k[T], the target of x -> 0"""
        R = self.ring
        idx = [R.index[n] for n in self.t_names]
        return Ring(self.t_names, [R.degrees[i] for i in idx], self.group, R.phi, R.characteristic)

    def graph_ideal(self) -> List[Polynomial]:
        """T_{i,j} - f_{i,j} u_i in R[u]"""
        Ru = self.elimination_ring
        out = []
        for i, (gens, names) in enumerate(zip(self.ideals, self.blocks)):
            u = Ru.var(self.u_names[i])
            for f, name in zip(gens, names):
                out.append(Ru.var(name) - transfer(f, Ru) * u)
        return out

    def to_dict(self) -> Dict:
        return {
            "base": self.base.to_dict(),
            "ideals": [[str(f) for f in gens] for gens in self.ideals],
            "rees_variables": [list(b) for b in self.blocks],
            "shifted": self.shifted,
            "equigenerated": list(self.equigenerated),
        }


def rees_ideal(setup: ReesSetup) -> List[Polynomial]:
    """Generators of ker(R -> S[u], T_{i,j} -> f_{i,j} u_i)"""
    gens = eliminate(setup.graph_ideal(), setup.u_names)
    R = setup.ring
    out = [transfer(g, R) for g in gens]
    logger.debug("rees ideal: %d generators", len(out))
    return out


def _base_presentation(presentation: Optional[Presentation], setup: ReesSetup) -> Presentation:
    if presentation is None:
        return Presentation.cyclic(setup.base)
    if presentation.ring != setup.base:
        raise AmbientMismatch("The module presentation is not over the base ring")
    return presentation


def rees_module_presentation(presentation: Optional[Presentation], setup: ReesSetup) -> Presentation:
    """
    Presentation of M R = sum_t M I^t T^t over R.

    Generators are those of M in Z^s-degree 0. The relations are the kernel
    of F (x) R -> M (x) S[u], obtained by eliminating u from the graph
    relations on every generator together with the relations of M.
    """
    M = _base_presentation(presentation, setup)
    G = setup.base.group
    zero_t = (0,) * setup.s
    shifts = [G.embed(d, zero_t) for d in M.module.shifts]

    Ru = setup.elimination_ring
    Fu = Ru.free_module(shifts)
    elements: List[FreeModuleElement] = []
    for k in range(Fu.rank):
        basis = Fu.basis(k)
        for g in setup.graph_ideal():
            elements.append(g * basis)
    elements.extend(transfer(r, Fu) for r in M.relations)

    kept = eliminate_module(elements, setup.u_names)
    F = setup.ring.free_module(shifts)
    relations = minimal_generators([transfer(r, F) for r in kept], F) if kept else []
    logger.info("rees module presentation: %d generators, %d relations", F.rank, len(relations))
    return Presentation(F, relations)


def power_ideal(setup: ReesSetup, t: Sequence[int]) -> List[Polynomial]:
    """All products of generators with t_i factors from ideal i"""
    t = tuple(int(v) for v in t)
    if len(t) != setup.s:
        raise BasymError(f"Power vector {t} has {len(t)} entries for {setup.s} ideals")
    if any(v < 0 for v in t):
        raise NegativePower(f"Power vector {t} has a negative entry")

    per_block = []
    for gens, ti in zip(setup.ideals, t):
        per_block.append(
            [_product(setup.base, combo) for combo in itertools.combinations_with_replacement(gens, ti)]
        )
    out = []
    for choice in itertools.product(*per_block):
        out.append(_product(setup.base, choice))
    return out


def _product(ring: Ring, factors: Sequence[Polynomial]) -> Polynomial:
    result = ring.one()
    for f in factors:
        result = result * f
    return result


def power_presentation(
    setup: ReesSetup, t: Sequence[int], presentation: Optional[Presentation] = None
) -> Presentation:
    """Presentation over S of M I^t, as the submodule of M generated by I^t times its generators"""
    M = _base_presentation(presentation, setup)
    products = minimal_generators(
        [f.as_element() for f in power_ideal(setup, t)], setup.base.ideal_module()
    )
    generators = []
    for k in range(M.module.rank):
        basis = M.module.basis(k)
        generators.extend(p.component(0) * basis for p in products)
    return image_presentation(generators, M.relations)


def translate_degree(degree: Degree, setup: ReesSetup, inverse: bool = False) -> Degree:
    """(delta, t) -> (delta + sum t_i gamma_i, t); the inverse undoes it"""
    delta, t = degree.split(setup.s)
    offset = delta.group.zero()
    for ti, gamma in zip(t, setup.gammas):
        offset = offset + ti * gamma
    moved = delta - offset if inverse else delta + offset
    return setup.base.group.embed(moved, t)
