"""
Groebner bases for submodules of graded free modules

Division with remainder, Buchberger's algorithm with the normal selection
strategy and the Gebauer-Moeller pair update, Schreyer syzygies read off the
tracked S-pair reductions, initial submodules and block elimination.
"""
from __future__ import annotations

import heapq
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .exceptions import AmbientMismatch
from .polyalg import (
    Exponents,
    FreeModuleElement,
    GradedFreeModule,
    MonomialOrder,
    Polynomial,
    Ring,
    Term,
    homogeneous_degree,
    transfer,
)

logger = logging.getLogger(__name__)

Terms = Dict[Term, int]


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def _quotient(b: Exponents, a: Exponents) -> Exponents:
    return tuple(y - x for x, y in zip(a, b))


def _neg_key(key: Tuple) -> Tuple:
    return tuple(-k for k in key)


def _as_elements(gens: Sequence[Union[Polynomial, FreeModuleElement]]) -> List[FreeModuleElement]:
    out = []
    for g in gens:
        out.append(g.as_element() if isinstance(g, Polynomial) else g)
    modules = {g.module for g in out}
    if len(modules) > 1:
        raise AmbientMismatch("Generators live in different free modules")
    return out


def _reorder(
    elements: Sequence[FreeModuleElement],
    module: GradedFreeModule,
    order: Optional[MonomialOrder],
) -> Tuple[List[FreeModuleElement], GradedFreeModule]:
    if order is None or order == module.ring.order:
        return list(elements), module
    target = module.with_ring(module.ring.with_order(order))
    return [transfer(e, target) for e in elements], target


class _Reducer:
    """Division engine over a growing list of monic elements"""

    def __init__(self, module: GradedFreeModule):
        self.module = module
        self.ring = module.ring
        self.key = module.ring.order.key
        self.p = module.ring.characteristic
        self.elements: List[Terms] = []
        self.leads: List[Term] = []
        self.by_position: Dict[int, List[int]] = {}

    def append(self, terms: Terms, lead: Term) -> int:
        self.elements.append(terms)
        self.leads.append(lead)
        self.by_position.setdefault(lead[0], []).append(len(self.elements) - 1)
        return len(self.elements) - 1

    def find(self, term: Term) -> Optional[int]:
        pos, exps = term
        for idx in self.by_position.get(pos, ()):
            if _divides(self.leads[idx][1], exps):
                return idx
        return None

    def reduce(self, terms: Terms, full: bool = True) -> Tuple[Terms, List[Tuple[int, Exponents, int]]]:
        """
        Divide terms by the stored elements.

        Returns (remainder, quotients) with terms = remainder + sum c * x^shift * g_idx
        over the quotient triples (idx, shift, c).
        """
        key, p = self.key, self.p
        rem = dict(terms)
        heap = [(_neg_key(key(t)), t) for t in rem]
        heapq.heapify(heap)
        result: Terms = {}
        quotients = []

        while heap:
            _, t = heapq.heappop(heap)
            c = rem.pop(t, None)
            if c is None:
                continue
            idx = self.find(t)
            if idx is None:
                result[t] = c
                if not full:
                    result.update(rem)
                    break
                continue

            lead = self.leads[idx]
            shift = _quotient(t[1], lead[1])
            for (pos, e), gc in self.elements[idx].items():
                if (pos, e) == lead:
                    continue
                nt = (pos, tuple(a + b for a, b in zip(e, shift)))
                old = rem.get(nt)
                new = ((old or 0) - c * gc) % p
                if new:
                    rem[nt] = new
                    if old is None:
                        heapq.heappush(heap, (_neg_key(key(nt)), nt))
                elif old is not None:
                    del rem[nt]
            quotients.append((idx, shift, c))

        return result, quotients


def _combine(target: Terms, source: Terms, shift: Exponents, c: int, p: int) -> None:
    """target -= c * x^shift * source, in place"""
    for (pos, e), v in source.items():
        t = (pos, tuple(a + b for a, b in zip(e, shift)))
        new = (target.get(t, 0) - c * v) % p
        if new:
            target[t] = new
        else:
            target.pop(t, None)


class _Buchberger:
    """
    Incremental Buchberger state.

    Pairs are selected by the normal strategy (smallest phi-weight of the lcm
    first) and pruned by the Gebauer-Moeller criteria. No basis element is
    ever discarded, so with ``track`` set every element carries its cofactors
    over the input generators and every S-pair reducing to zero yields a
    syzygy of the input.
    """

    def __init__(self, module: GradedFreeModule, track: Optional[GradedFreeModule] = None):
        self.module = module
        self.ring = module.ring
        self.p = module.ring.characteristic
        self.reducer = _Reducer(module)
        self.track = track
        self.coprime_criterion = track is None and module.rank == 1
        self.cofactors: List[Terms] = []
        self.syzygies: List[Terms] = []
        self.pairs: Dict[Tuple[int, int], Tuple] = {}
        self.queue: List[Tuple] = []
        self.reductions = 0

    def weight(self, term: Term) -> Fraction:
        return self.ring.phi(self.module.term_degree(term))

    # Insertion

    def insert(self, terms: Terms, cofactor: Optional[Terms] = None) -> Optional[int]:
        """Reduce and add an element; returns its index or None if it reduced to zero"""
        rem, quotients = self.reducer.reduce(terms, full=False)
        self.reductions += 1
        if self.track is not None:
            cofactor = dict(cofactor or {})
            for idx, shift, c in quotients:
                _combine(cofactor, self.cofactors[idx], shift, c, self.p)
        if not rem:
            if self.track is not None and cofactor:
                self.syzygies.append(cofactor)
            return None

        lead = max(rem, key=self.reducer.key)
        inv = pow(rem[lead], -1, self.p)
        rem = {t: c * inv % self.p for t, c in rem.items()}
        idx = self.reducer.append(rem, lead)
        if self.track is not None:
            self.cofactors.append({t: c * inv % self.p for t, c in cofactor.items()})
        self._update(idx)
        return idx

    def _update(self, h: int) -> None:
        leads = self.reducer.leads
        pos, eh = leads[h]

        for (i, j) in list(self.pairs):
            if leads[i][0] != pos:
                continue
            L = _lcm(leads[i][1], leads[j][1])
            if (
                _divides(eh, L)
                and L != _lcm(leads[i][1], eh)
                and L != _lcm(leads[j][1], eh)
            ):
                del self.pairs[(i, j)]

        classes: Dict[Exponents, List[int]] = {}
        for i in self.reducer.by_position.get(pos, ()):
            if i != h:
                classes.setdefault(_lcm(leads[i][1], eh), []).append(i)

        order = self.ring.order
        kept: List[Exponents] = []
        for L in sorted(classes, key=order.term_key):
            if all(not _divides(K, L) for K in kept):
                kept.append(L)

        for L in kept:
            members = classes[L]
            if self.coprime_criterion and any(
                L == tuple(a + b for a, b in zip(leads[i][1], eh)) for i in members
            ):
                continue
            pair = (min(members), h)
            term = (pos, L)
            priority = (self.weight(term), order.key(term), pair)
            self.pairs[pair] = priority
            heapq.heappush(self.queue, priority)

    # Pair processing

    def run(self, max_weight: Optional[Fraction] = None) -> None:
        """Process pending pairs, optionally only those of weight <= max_weight"""
        while self.queue:
            priority = self.queue[0]
            pair = priority[2]
            if self.pairs.get(pair) != priority:
                heapq.heappop(self.queue)
                continue
            if max_weight is not None and priority[0] > max_weight:
                break
            heapq.heappop(self.queue)
            del self.pairs[pair]
            self._process(*pair)

    def _process(self, i: int, j: int) -> None:
        elements, leads = self.reducer.elements, self.reducer.leads
        L = _lcm(leads[i][1], leads[j][1])
        si = _quotient(L, leads[i][1])
        sj = _quotient(L, leads[j][1])

        spoly: Terms = {}
        _combine(spoly, elements[i], si, -1, self.p)
        _combine(spoly, elements[j], sj, 1, self.p)

        cofactor = None
        if self.track is not None:
            cofactor = {}
            _combine(cofactor, self.cofactors[i], si, -1, self.p)
            _combine(cofactor, self.cofactors[j], sj, 1, self.p)
        self.insert(spoly, cofactor)

    # Results

    def basis(self) -> List[Terms]:
        return list(self.reducer.elements)


def _weight_of(element: FreeModuleElement) -> Fraction:
    return element.ring.phi(element.module.term_degree(element.lead_term()))


def _sorted_for_insertion(elements: Sequence[FreeModuleElement]) -> List[int]:
    def key(i: int):
        e = elements[i]
        if e.is_zero():
            return (Fraction(0), (), i)
        return (_weight_of(e), e.ring.order.key(e.lead_term()), i)

    return sorted(range(len(elements)), key=key)


def _minimalize(module: GradedFreeModule, basis: List[Terms]) -> List[Terms]:
    key = module.ring.order.key
    leads = [max(b, key=key) for b in basis]
    ordered = sorted(range(len(basis)), key=lambda i: key(leads[i]))
    kept: List[int] = []
    for i in ordered:
        pos, e = leads[i]
        if all(
            not (leads[k][0] == pos and _divides(leads[k][1], e)) for k in kept
        ):
            kept.append(i)
    return [basis[i] for i in kept]


def _interreduce(module: GradedFreeModule, basis: List[Terms]) -> List[Terms]:
    key = module.ring.order.key
    p = module.ring.characteristic
    out = []
    for i, b in enumerate(basis):
        reducer = _Reducer(module)
        for k, other in enumerate(basis):
            if k != i:
                reducer.append(other, max(other, key=key))
        rem, _ = reducer.reduce(b, full=True)
        lead = max(rem, key=key)
        inv = pow(rem[lead], -1, p)
        out.append({t: c * inv % p for t, c in rem.items()})
    return out


class GroebnerBasis:
    """A Groebner basis of a submodule of a graded free module"""

    def __init__(self, module: GradedFreeModule, generators: Sequence[FreeModuleElement], reduced: bool):
        self.module = module
        self.order = module.ring.order
        self.generators: Tuple[FreeModuleElement, ...] = tuple(generators)
        self.reduced = reduced
        self._reducer = _Reducer(module)
        for g in self.generators:
            self._reducer.append(g.terms, g.lead_term())

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def leads(self) -> List[Term]:
        return list(self._reducer.leads)

    def reduce(self, v: FreeModuleElement) -> FreeModuleElement:
        rem, _ = self._reducer.reduce(v.terms, full=True)
        return FreeModuleElement(self.module, rem)

    def contains(self, v: Union[Polynomial, FreeModuleElement]) -> bool:
        if isinstance(v, Polynomial):
            v = v.as_element(self.module)
        return self.reduce(v).is_zero()

    def is_standard(self, term: Term) -> bool:
        return self._reducer.find(term) is None

    def standard_terms(self, degree) -> List[Term]:
        """Terms of the given degree outside the initial submodule"""
        return [t for t in self.module.basis_of_degree(degree) if self.is_standard(t)]

    def polynomials(self) -> List[Polynomial]:
        if self.module.rank != 1:
            raise AmbientMismatch("Only rank-one bases convert to polynomials")
        return [g.component(0) for g in self.generators]

    def initial_terms(self) -> List[FreeModuleElement]:
        return [FreeModuleElement(self.module, {t: 1}) for t in self.leads]

    def is_groebner(self) -> bool:
        """Every S-pair reduces to zero"""
        leads = self.leads
        for i in range(len(leads)):
            for j in range(i + 1, len(leads)):
                if leads[i][0] != leads[j][0]:
                    continue
                L = _lcm(leads[i][1], leads[j][1])
                s = self.generators[i].mul_term(_quotient(L, leads[i][1])) - self.generators[
                    j
                ].mul_term(_quotient(L, leads[j][1]))
                if not self.reduce(s).is_zero():
                    return False
        return True

    def __str__(self) -> str:
        if self.module.rank == 1:
            return "\n".join(str(g) for g in self.polynomials())
        return "\n".join(str(g) for g in self.generators)


def buchberger(
    gens: Sequence[Union[Polynomial, FreeModuleElement]],
    order: Optional[MonomialOrder] = None,
    reduced: bool = True,
    module: Optional[GradedFreeModule] = None,
) -> GroebnerBasis:
    """Groebner basis of the submodule generated by gens"""
    elements = _as_elements(gens)
    if module is None:
        if not elements:
            raise AmbientMismatch("An empty generator list needs an explicit module")
        module = elements[0].module
    elements, module = _reorder(elements, module, order)

    state = _Buchberger(module)
    for i in _sorted_for_insertion(elements):
        e = elements[i]
        if e.is_zero():
            continue
        state.run(_weight_of(e))
        state.insert(e.terms)
    state.run()
    logger.debug(
        "buchberger: %d generators, %d basis elements, %d reductions",
        len(elements),
        len(state.basis()),
        state.reductions,
    )

    basis = _minimalize(module, state.basis())
    if reduced:
        basis = _interreduce(module, basis)
    key = module.ring.order.key
    basis.sort(key=lambda b: key(max(b, key=key)))
    return GroebnerBasis(module, [FreeModuleElement(module, b) for b in basis], reduced)


def normal_form(
    v: Union[Polynomial, FreeModuleElement],
    basis: Union[GroebnerBasis, Sequence[Union[Polynomial, FreeModuleElement]]],
    order: Optional[MonomialOrder] = None,
) -> Union[Polynomial, FreeModuleElement]:
    """Remainder of v on division by basis; no remainder term is divisible by a lead term"""
    polynomial = isinstance(v, Polynomial)
    element = v.as_element() if polynomial else v
    if isinstance(basis, GroebnerBasis):
        gens = list(basis.generators)
    else:
        gens = [g for g in _as_elements(basis) if not g.is_zero()]
    (element,), module = _reorder([element], element.module, order)
    gens, _ = _reorder(gens, gens[0].module if gens else module, order)

    reducer = _Reducer(module)
    for g in gens:
        g = g.monic()
        reducer.append(g.terms, g.lead_term())
    rem, _ = reducer.reduce(element.terms, full=True)
    result = FreeModuleElement(module, rem)
    if order is not None:
        result = transfer(result, v.module if not polynomial else v.ring.ideal_module())
    return result.component(0) if polynomial else result


def initial_submodule(
    gens: Sequence[Union[Polynomial, FreeModuleElement]],
    order: Optional[MonomialOrder] = None,
    module: Optional[GradedFreeModule] = None,
) -> List[FreeModuleElement]:
    """Monomial generators of in(K): lead terms of a reduced Groebner basis"""
    return buchberger(gens, order, module=module).initial_terms()


def syzygy_basis(
    gens: Sequence[Union[Polynomial, FreeModuleElement]],
    order: Optional[MonomialOrder] = None,
    source: Optional[GradedFreeModule] = None,
) -> List[FreeModuleElement]:
    """
    Generators of the syzygy module of gens.

    The syzygies live in ``source``, a free module with one basis element per
    generator; by default basis element i has the degree of gens[i].
    """
    elements = _as_elements(gens)
    if not elements:
        return []
    module = elements[0].module
    if source is None:
        ring = module.ring
        source = ring.free_module([homogeneous_degree(e) for e in elements])
    if source.rank != len(elements):
        raise AmbientMismatch(f"Source of rank {source.rank} for {len(elements)} generators")
    elements, work = _reorder(elements, module, order)

    state = _Buchberger(work, track=source)
    zero = source.ring.zero_exponents()
    found: List[Terms] = []
    for i in _sorted_for_insertion(elements):
        e = elements[i]
        unit = {(i, zero): 1}
        if e.is_zero():
            found.append(unit)
            continue
        state.run(_weight_of(e))
        state.insert(e.terms, unit)
    state.run()
    found.extend(state.syzygies)

    logger.debug(
        "syzygy_basis: %d generators, %d basis elements, %d syzygies",
        len(elements),
        len(state.basis()),
        len(found),
    )
    out, seen = [], set()
    for terms in found:
        s = FreeModuleElement(source, terms)
        if s.is_zero():
            continue
        s = s.monic()
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def minimal_generators(
    elements: Sequence[Union[Polynomial, FreeModuleElement]],
    module: Optional[GradedFreeModule] = None,
) -> List[FreeModuleElement]:
    """
    A minimal homogeneous generating set, chosen among the given elements.

    Elements are visited by increasing phi-weight; one is kept when it is not
    in the span of those kept before it.
    """
    elements = [e for e in _as_elements(elements) if not e.is_zero()]
    if not elements:
        return []
    module = module or elements[0].module
    state = _Buchberger(module)
    kept = []
    for i in _sorted_for_insertion(elements):
        e = elements[i]
        state.run(_weight_of(e))
        if state.insert(e.terms) is not None:
            kept.append(e)
    return kept


def _block_indices(ring: Ring, block: Iterable[Union[int, str]]) -> Tuple[int, ...]:
    return tuple(ring.index[b] if isinstance(b, str) else int(b) for b in block)


def eliminate(ideal_gens: Sequence[Polynomial], block: Iterable[Union[int, str]]) -> List[Polynomial]:
    """Generators of the ideal intersected with the subring without the block variables"""
    if not ideal_gens:
        return []
    ring = ideal_gens[0].ring
    indices = _block_indices(ring, block)
    gb = buchberger(ideal_gens, MonomialOrder.elimination(indices))
    kept = [g for g in gb.polynomials() if not set(g.variables()) & set(indices)]
    return [transfer(g, ring) for g in kept]


def eliminate_module(
    elements: Sequence[FreeModuleElement], block: Iterable[Union[int, str]]
) -> List[FreeModuleElement]:
    """Submodule intersected with the free module over the subring without the block"""
    if not elements:
        return []
    module = elements[0].module
    indices = set(_block_indices(module.ring, block))
    gb = buchberger(elements, MonomialOrder.elimination(indices))
    kept = []
    for g in gb.generators:
        if all(not any(e[i] for i in indices) for (_, e) in g.terms):
            kept.append(transfer(g, module))
    return kept
