"""
Homological algebra over graded polynomial rings

Module presentations, graded maps and complexes of free modules, free
resolutions (Schreyer syzygies, then minimalization), strands, homology
presentations, Betti tables and windowed Hilbert functions.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .exceptions import AmbientMismatch, BasymError, ResolutionLengthExceeded
from .grading import Degree
from .groebner import GroebnerBasis, buchberger, minimal_generators, syzygy_basis
from .polyalg import (
    Exponents,
    FreeModuleElement,
    GradedFreeModule,
    Polynomial,
    Ring,
    Term,
    homogeneous_degree,
    monomials_of_degree,
    transfer,
)

logger = logging.getLogger(__name__)


def matrix_rank(entries: Dict[Tuple[int, int], int], shape: Tuple[int, int], ring: Ring) -> int:
    """Rank over F_p of a sparse matrix given as {(row, col): value}"""
    if shape[0] == 0 or shape[1] == 0 or not entries:
        return 0
    K = ring.field.domain
    rows: Dict[int, Dict[int, object]] = {}
    for (i, j), v in entries.items():
        if v % ring.characteristic:
            rows.setdefault(i, {})[j] = K(v)
    if not rows:
        return 0
    return DomainMatrix(rows, shape, K).rank()


@dataclass
class Presentation:
    """The module F / <relations> for a graded free module F"""

    module: GradedFreeModule
    relations: List[FreeModuleElement] = field(default_factory=list)

    def __post_init__(self):
        for r in self.relations:
            if r.module != self.module:
                raise AmbientMismatch(f"Relation {r} does not live in {self.module}")
        self.relations = [r for r in self.relations if not r.is_zero()]

    @classmethod
    def cyclic(cls, ring: Ring, relations: Sequence[Polynomial] = (), shift: Optional[Degree] = None):
        """R(-shift) / (relations)"""
        module = ring.free_module([shift if shift is not None else ring.group.zero()])
        return cls(module, [f.as_element(module) for f in relations])

    @classmethod
    def free(cls, ring: Ring, shifts: Sequence[Degree]) -> "Presentation":
        return cls(ring.free_module(shifts), [])

    @classmethod
    def direct_sum(cls, parts: Sequence["Presentation"]) -> "Presentation":
        if not parts:
            raise BasymError("A direct sum needs at least one summand")
        ring = parts[0].ring
        shifts = [d for part in parts for d in part.module.shifts]
        module = ring.free_module(shifts)
        relations, offset = [], 0
        for part in parts:
            if part.ring != ring:
                raise AmbientMismatch("Direct summands live over different rings")
            for r in part.relations:
                relations.append(
                    FreeModuleElement(module, {(pos + offset, e): c for (pos, e), c in r.terms.items()})
                )
            offset += part.module.rank
        return cls(module, relations)

    @property
    def ring(self) -> Ring:
        return self.module.ring

    @property
    def generator_degrees(self) -> Tuple[Degree, ...]:
        return self.module.shifts

    @cached_property
    def groebner(self) -> GroebnerBasis:
        return buchberger(self.relations, module=self.module)

    def with_ring(self, ring: Ring) -> "Presentation":
        module = self.module.with_ring(ring)
        return Presentation(module, [transfer(r, module) for r in self.relations])

    def hilbert(self, degree: Degree) -> int:
        return len(self.groebner.standard_terms(degree))

    def is_zero(self) -> bool:
        """True iff every generator lies in the span of the relations"""
        if not self.relations:
            return self.module.rank == 0
        zero = self.ring.zero_exponents()
        return all(not self.groebner.is_standard((pos, zero)) for pos in range(self.module.rank))

    def to_dict(self) -> Dict:
        return {
            "generators": [d.to_list() for d in self.module.shifts],
            "relations": [str(r) for r in self.relations],
        }


class GradedMap:
    """Degree-0 map between graded free modules, given by its columns"""

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, columns: Sequence[FreeModuleElement]):
        if len(columns) != source.rank:
            raise AmbientMismatch(f"{len(columns)} columns for a source of rank {source.rank}")
        for col in columns:
            if col.module != target:
                raise AmbientMismatch(f"Column {col} does not live in the target")
        self.source = source
        self.target = target
        self.columns: Tuple[FreeModuleElement, ...] = tuple(columns)

    def check_degrees(self) -> None:
        for j, col in enumerate(self.columns):
            if not col.is_zero() and homogeneous_degree(col) != self.source.shifts[j]:
                raise BasymError(
                    f"Column {j} has degree {homogeneous_degree(col)}, "
                    f"source basis element has degree {self.source.shifts[j]}"
                )

    def apply(self, v: FreeModuleElement) -> FreeModuleElement:
        if v.module != self.source:
            raise AmbientMismatch(f"{v} is not in the source of this map")
        result = self.target.zero()
        for pos in range(self.source.rank):
            coeff = v.component(pos)
            if not coeff.is_zero():
                result = result + coeff * self.columns[pos]
        return result

    def constant_entries(self) -> Dict[Tuple[int, int], int]:
        """Scalar entries {(row, col): u}; non-empty iff the map is not minimal"""
        zero = self.source.ring.zero_exponents()
        out = {}
        for j, col in enumerate(self.columns):
            for (pos, e), c in col.terms.items():
                if e == zero:
                    out[(pos, j)] = c
        return out


class GradedComplex:
    """0 <- F_0 <- F_1 <- ... <- F_n with maps[i - 1] = d_i : F_i -> F_{i-1}"""

    def __init__(self, modules: Sequence[GradedFreeModule], maps: Sequence[GradedMap]):
        if len(maps) != max(len(modules) - 1, 0):
            raise AmbientMismatch(f"{len(modules)} modules need {len(modules) - 1} maps")
        for i, d in enumerate(maps):
            if d.source != modules[i + 1] or d.target != modules[i]:
                raise AmbientMismatch(f"Map d_{i + 1} does not connect F_{i + 1} to F_{i}")
        self.modules: Tuple[GradedFreeModule, ...] = tuple(modules)
        self.maps: Tuple[GradedMap, ...] = tuple(maps)

    @property
    def ring(self) -> Ring:
        return self.modules[0].ring

    @property
    def length(self) -> int:
        return len(self.maps)

    def module(self, i: int) -> Optional[GradedFreeModule]:
        return self.modules[i] if 0 <= i < len(self.modules) else None

    def differential(self, i: int) -> Optional[GradedMap]:
        return self.maps[i - 1] if 1 <= i <= len(self.maps) else None

    def is_complex(self) -> bool:
        """d_i o d_{i+1} = 0 exactly"""
        for i in range(1, len(self.maps)):
            d, e = self.maps[i - 1], self.maps[i]
            if any(not d.apply(col).is_zero() for col in e.columns):
                return False
        return True

    def is_minimal(self) -> bool:
        return all(not d.constant_entries() for d in self.maps)

    def check(self) -> None:
        for d in self.maps:
            d.check_degrees()
        if not self.is_complex():
            raise BasymError("Differentials do not compose to zero")

    def shifts(self, i: int) -> Tuple[Degree, ...]:
        m = self.module(i)
        return m.shifts if m is not None else ()

    def betti_table(self) -> "BettiTable":
        entries: Dict[Tuple[int, Degree], int] = {}
        for i, m in enumerate(self.modules):
            for d in m.shifts:
                entries[(i, d)] = entries.get((i, d), 0) + 1
        return BettiTable(self.ring, entries)

    def transfer(self, ring: Ring) -> "GradedComplex":
        """The same complex with entries moved into ``ring`` (missing variables go to zero)"""
        modules = [m.with_ring(ring) for m in self.modules]
        maps = [
            GradedMap(modules[i + 1], modules[i], [transfer(c, modules[i]) for c in d.columns])
            for i, d in enumerate(self.maps)
        ]
        return GradedComplex(modules, maps)


class BettiTable:
    """Multiplicities beta_{i, eta}"""

    def __init__(self, ring: Ring, entries: Dict[Tuple[int, Degree], int]):
        self.ring = ring
        self.entries = {k: v for k, v in entries.items() if v}

    def __eq__(self, other) -> bool:
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __getitem__(self, key: Tuple[int, Degree]) -> int:
        return self.entries.get(key, 0)

    def indices(self) -> List[int]:
        return sorted({i for i, _ in self.entries})

    def support(self, i: int) -> List[Degree]:
        return self._sorted(d for (j, d) in self.entries if j == i)

    def _sorted(self, degrees: Iterable[Degree]) -> List[Degree]:
        phi = self.ring.phi
        return sorted(set(degrees), key=lambda d: (phi(d), d.coordinates()))

    def to_dict(self) -> Dict:
        return {
            str(i): [
                {"degree": d.to_list(), "multiplicity": self.entries[(i, d)]}
                for d in self.support(i)
            ]
            for i in self.indices()
        }

    def rows(self) -> List[Tuple[int, str, int]]:
        return [(i, str(d), self.entries[(i, d)]) for i in self.indices() for d in self.support(i)]


# Resolutions


def free_resolution(presentation: Presentation, length: Optional[int] = None) -> GradedComplex:
    """
    Minimal graded free resolution of the presented module.

    Each kernel is generated by Schreyer syzygies pruned to a minimal
    generating set; the result is then minimalized, which removes redundancy
    among the presentation's own generators. With ``length`` set, the
    resolution stops at F_length.
    """
    ring = presentation.ring
    cap = ring.nvars + 1
    modules = [presentation.module]
    maps: List[GradedMap] = []
    current = minimal_generators(presentation.relations, presentation.module)

    while current and (length is None or len(maps) < length):
        if len(maps) >= cap:
            raise ResolutionLengthExceeded(
                f"Resolution over {ring.nvars} variables exceeds length {cap}"
            )
        source = ring.free_module([homogeneous_degree(c) for c in current])
        maps.append(GradedMap(source, modules[-1], current))
        modules.append(source)
        logger.debug("resolution step %d: rank %d", len(maps), source.rank)
        if length is not None and len(maps) >= length:
            break
        syz = syzygy_basis(current, source=source)
        current = minimal_generators(syz, source)

    return minimalize(GradedComplex(modules, maps))


def _drop_position(terms: Dict[Term, int], removed: int) -> Dict[Term, int]:
    out = {}
    for (pos, e), c in terms.items():
        if pos == removed:
            continue
        out[(pos - 1 if pos > removed else pos, e)] = c
    return out


def minimalize(c: GradedComplex) -> GradedComplex:
    """Cancel scalar entries of the differentials until none remain"""
    ring = c.ring
    p = ring.characteristic
    shifts = [list(m.shifts) for m in c.modules]
    columns: List[List[Dict[Term, int]]] = [[dict(col.terms) for col in d.columns] for d in c.maps]
    zero = ring.zero_exponents()
    cancelled = 0

    def find_unit() -> Optional[Tuple[int, int, int, int]]:
        for k, cols in enumerate(columns):
            for j, col in enumerate(cols):
                for (pos, e), v in col.items():
                    if e == zero:
                        return k, j, pos, v
        return None

    while True:
        unit = find_unit()
        if unit is None:
            break
        k, cidx, r, u = unit
        inv = pow(u, -1, p)
        cols = columns[k]
        pivot = cols[cidx]

        new_cols = []
        for j, col in enumerate(cols):
            if j == cidx:
                continue
            beta = {e: v for (pos, e), v in col.items() if pos == r}
            col = dict(col)
            for be, bv in beta.items():
                factor = bv * inv % p
                for (pos, e), v in pivot.items():
                    t = (pos, tuple(a + b for a, b in zip(e, be)))
                    new = (col.get(t, 0) - factor * v) % p
                    if new:
                        col[t] = new
                    else:
                        col.pop(t, None)
            new_cols.append(_drop_position(col, r))
        columns[k] = new_cols

        if k + 1 < len(columns):
            columns[k + 1] = [_drop_position(col, cidx) for col in columns[k + 1]]
        if k >= 1:
            columns[k - 1] = [col for j, col in enumerate(columns[k - 1]) if j != r]

        del shifts[k + 1][cidx]
        del shifts[k][r]
        cancelled += 1

    if cancelled:
        logger.debug("minimalize cancelled %d unit entries", cancelled)

    modules = [ring.free_module(s) for s in shifts]
    # Trailing zero modules carry no information.
    while len(modules) > 1 and modules[-1].rank == 0:
        modules.pop()
    maps = [
        GradedMap(modules[i + 1], modules[i], [FreeModuleElement(modules[i], col) for col in columns[i]])
        for i in range(len(modules) - 1)
    ]
    return GradedComplex(modules, maps)


def tor_table(presentation: Presentation, max_i: Optional[int] = None) -> BettiTable:
    """Betti numbers dim Tor_i(M, k)_eta for i <= max_i"""
    resolution = free_resolution(presentation, length=max_i)
    return resolution.betti_table()


def tor_dimensions(c: GradedComplex) -> BettiTable:
    """Dimensions of the homology of c tensored with k, degree by degree"""
    ring = c.ring
    entries: Dict[Tuple[int, Degree], int] = {}
    constants = [d.constant_entries() for d in c.maps]

    def rank_at(i: int, degree: Degree) -> int:
        # rank of d_i restricted to degree ``degree``
        if not 1 <= i <= len(c.maps):
            return 0
        source_idx = [j for j, d in enumerate(c.modules[i].shifts) if d == degree]
        target_idx = [j for j, d in enumerate(c.modules[i - 1].shifts) if d == degree]
        rows = {r: n for n, r in enumerate(target_idx)}
        cols = {s: n for n, s in enumerate(source_idx)}
        sub = {
            (rows[r], cols[s]): v
            for (r, s), v in constants[i - 1].items()
            if r in rows and s in cols
        }
        return matrix_rank(sub, (len(target_idx), len(source_idx)), ring)

    for i, m in enumerate(c.modules):
        for degree in set(m.shifts):
            n = sum(1 for d in m.shifts if d == degree)
            dim = n - rank_at(i, degree) - rank_at(i + 1, degree)
            if dim:
                entries[(i, degree)] = dim
    return BettiTable(ring, entries)


# Strands


def _t_monomials(ring: Ring, t_indices: Sequence[int], s: int, target: Sequence[int]) -> List[Exponents]:
    """Exponents on the T-variables (given by index) whose Z^s-degree equals target"""
    if any(v < 0 for v in target):
        return []
    blocks: List[List[int]] = [[] for _ in range(s)]
    for idx in t_indices:
        _, z = ring.degrees[idx].split(s)
        blocks[z.index(1)].append(idx)

    def compositions(total: int, parts: int) -> Iterable[Tuple[int, ...]]:
        if parts == 0:
            if total == 0:
                yield ()
            return
        if parts == 1:
            yield (total,)
            return
        for a in range(total, -1, -1):
            for rest in compositions(total - a, parts - 1):
                yield (a,) + rest

    out = []
    per_block = [list(compositions(target[i], len(blocks[i]))) for i in range(s)]
    for choice in itertools.product(*per_block):
        exps = [0] * ring.nvars
        for block, comp in zip(blocks, choice):
            for idx, a in zip(block, comp):
                exps[idx] = a
        out.append(tuple(exps))
    return out


def strand(c: GradedComplex, t: Sequence[int], base: Ring) -> GradedComplex:
    """
    The (*, t)-strand of a complex over base[T] graded by G x Z^s, as a
    complex of free ``base``-modules.

    Its i-th term is the sum over basis elements e of F_i with degree (eta, j)
    of copies of base(-eta - deg_G T^b) for the T-monomials T^b of Z^s-degree
    t - j.
    """
    ring = c.ring
    s = len(t)
    t_indices = [i for i, n in enumerate(ring.names) if n not in base.index]
    x_map = {i: base.index[n] for i, n in enumerate(ring.names) if n in base.index}

    bases: List[List[Tuple[int, Exponents]]] = []
    modules: List[GradedFreeModule] = []
    for m in c.modules:
        basis, shifts = [], []
        for k, shift in enumerate(m.shifts):
            eta, j = shift.split(s)
            for b in _t_monomials(ring, t_indices, s, [a - bj for a, bj in zip(t, j)]):
                g_part, _ = ring.monomial_degree(b).split(s)
                basis.append((k, b))
                shifts.append(eta + g_part)
        bases.append(basis)
        modules.append(base.free_module(shifts))

    maps = []
    for i, d in enumerate(c.maps):
        lookup = {key: n for n, key in enumerate(bases[i])}
        cols = []
        for k, b in bases[i + 1]:
            terms: Dict[Term, int] = {}
            for (pos, e), v in d.columns[k].terms.items():
                tb = [0] * ring.nvars
                xe = [0] * base.nvars
                for idx, a in enumerate(e):
                    if idx in x_map:
                        xe[x_map[idx]] = a
                for idx in t_indices:
                    tb[idx] = e[idx] + b[idx]
                target = lookup[(pos, tuple(tb))]
                key = (target, tuple(xe))
                terms[key] = (terms.get(key, 0) + v) % base.characteristic
            cols.append(FreeModuleElement(modules[i], terms))
        maps.append(GradedMap(modules[i + 1], modules[i], cols))
    return GradedComplex(modules, maps)


# Homology


def _projected_syzygies(
    module: GradedFreeModule, kept: Sequence[FreeModuleElement], extra: Sequence[FreeModuleElement]
) -> List[FreeModuleElement]:
    """Relations {a : sum a_k kept_k lies in the span of extra}, in ``module``"""
    gens = list(kept) + list(extra)
    if not gens:
        return []
    ring = module.ring
    extra_shifts = [homogeneous_degree(e) if not e.is_zero() else ring.group.zero() for e in extra]
    source = ring.free_module(list(module.shifts) + extra_shifts)
    out = []
    for s in syzygy_basis(gens, source=source):
        a = FreeModuleElement(module, {t: c for t, c in s.terms.items() if t[0] < module.rank})
        if not a.is_zero():
            out.append(a)
    return minimal_generators(out, module) if out else []


def image_presentation(
    generators: Sequence[FreeModuleElement], relations: Sequence[FreeModuleElement] = ()
) -> Presentation:
    """Presentation of the submodule of F / <relations> generated by ``generators``"""
    generators = [g for g in generators if not g.is_zero()]
    if not generators:
        raise BasymError("An image presentation needs a non-zero generator")
    ring = generators[0].ring
    P = ring.free_module([homogeneous_degree(g) for g in generators])
    return Presentation(P, _projected_syzygies(P, generators, [r for r in relations if not r.is_zero()]))


def subquotient_presentation(c: GradedComplex, i: int) -> Presentation:
    """Presentation of H_i(c) = ker d_i / im d_{i+1}"""
    ring = c.ring
    F = c.module(i)
    if F is None:
        return Presentation(ring.free_module([]), [])
    d_next = c.differential(i + 1)
    image = list(d_next.columns) if d_next is not None else []

    if i == 0 or c.differential(i) is None or all(col.is_zero() for col in c.differential(i).columns):
        return Presentation(F, image)

    d = c.differential(i)
    kernel = minimal_generators(syzygy_basis(list(d.columns), source=F), F)
    if not kernel:
        return Presentation(ring.free_module([]), [])
    return image_presentation(kernel, image)


# Hilbert functions


def hilbert_window(presentation: Presentation, degrees: Iterable[Degree]) -> Dict[Degree, int]:
    """dim_k M_gamma for each requested degree, counting standard terms"""
    return {d: presentation.hilbert(d) for d in degrees}


def graded_piece_dimension(presentation: Presentation, degree: Degree) -> int:
    """dim_k M_gamma by linear algebra on the monomial multiples of the relations"""
    module = presentation.module
    ring = presentation.ring
    basis = module.basis_of_degree(degree)
    index = {t: n for n, t in enumerate(basis)}
    entries: Dict[Tuple[int, int], int] = {}
    row = 0
    for r in presentation.relations:
        for m in monomials_of_degree(ring, degree - homogeneous_degree(r)):
            for (pos, e), v in r.mul_term(m).terms.items():
                entries[(row, index[(pos, e)])] = v
            row += 1
    return len(basis) - matrix_rank(entries, (row, len(basis)), ring)


def has_finite_length(presentation: Presentation) -> bool:
    """True iff every position has a pure power of every variable among its lead terms"""
    leads = presentation.groebner.leads
    ring = presentation.ring
    for pos in range(presentation.module.rank):
        mine = [e for q, e in leads if q == pos]
        if any(not any(e) for e in mine):
            continue
        for i in range(ring.nvars):
            if not any(e[i] > 0 and sum(e) == e[i] for e in mine):
                return False
    return True


def koszul_tor_dimension(presentation: Presentation, i: int, degree: Degree) -> int:
    """dim Tor_i(M, k)_gamma as homology of the Koszul complex on the variables"""
    ring = presentation.ring
    gb = presentation.groebner
    n = ring.nvars

    def piece(subset: Tuple[int, ...]) -> List[Term]:
        shift = degree
        for j in subset:
            shift = shift - ring.degrees[j]
        return gb.standard_terms(shift)

    def differential(k: int) -> int:
        # rank of the Koszul map from the k-th term to the (k-1)-th at this degree
        if k < 1 or k > n:
            return 0
        sources = list(itertools.combinations(range(n), k))
        targets = list(itertools.combinations(range(n), k - 1))
        col_index, row_index = {}, {}
        for J in sources:
            for t in piece(J):
                col_index[(J, t)] = len(col_index)
        for J in targets:
            for t in piece(J):
                row_index[(J, t)] = len(row_index)
        entries: Dict[Tuple[int, int], int] = {}
        for (J, (pos, e)), col in col_index.items():
            for sign_pos, j in enumerate(J):
                rest = J[:sign_pos] + J[sign_pos + 1:]
                sign = -1 if sign_pos % 2 else 1
                moved = list(e)
                moved[j] += 1
                image = gb.reduce(FreeModuleElement(presentation.module, {(pos, tuple(moved)): sign}))
                for term, v in image.terms.items():
                    key = (row_index[(rest, term)], col)
                    entries[key] = (entries.get(key, 0) + v) % ring.characteristic
        return matrix_rank(entries, (len(row_index), len(col_index)), ring)

    if i < 0 or i > n:
        return 0
    dim = sum(len(piece(J)) for J in itertools.combinations(range(n), i))
    return dim - differential(i) - differential(i + 1)
