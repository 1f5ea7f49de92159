"""
Degree groups

Finitely generated abelian groups G = Z^d + Z/m_1 + ... + Z/m_r, their
elements, positivity functionals on the free part, and the integer-lattice
computations (relations, independence) that the support machinery relies on.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .exceptions import BasymError, DegreeGroupMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegreeGroup:
    """Descriptor of G = Z^free_rank + sum Z/m_j"""

    free_rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise BasymError(f"Free rank must be non-negative, got {self.free_rank}")
        moduli = tuple(int(m) for m in self.torsion)
        for m in moduli:
            if m < 2:
                raise BasymError(f"Torsion moduli must be at least 2, got {m}")
        object.__setattr__(self, "torsion", moduli)

    @property
    def length(self) -> int:
        return self.free_rank + len(self.torsion)

    def degree(self, *values) -> "Degree":
        """Build a degree from free coordinates followed by torsion coordinates"""
        if len(values) == 1 and isinstance(values[0], (tuple, list)):
            values = tuple(values[0])
        if len(values) != self.length:
            raise BasymError(
                f"Degree {values} has {len(values)} coordinates, group {self} needs {self.length}"
            )
        values = tuple(int(v) for v in values)
        return Degree(self, values[: self.free_rank], values[self.free_rank:])

    def zero(self) -> "Degree":
        return Degree(self, (0,) * self.free_rank, (0,) * len(self.torsion))

    def extend(self, s: int) -> "DegreeGroup":
        """The group G x Z^s; the Z^s coordinates follow the free part of G"""
        return DegreeGroup(self.free_rank + s, self.torsion)

    def base(self, s: int) -> "DegreeGroup":
        """Inverse of extend(s)"""
        if s > self.free_rank:
            raise BasymError(f"Cannot split Z^{s} off {self}")
        return DegreeGroup(self.free_rank - s, self.torsion)

    def embed(self, delta: "Degree", t: Sequence[int]) -> "Degree":
        """The pair (delta, t) as an element of G x Z^s"""
        delta.require_group(self)
        group = self.extend(len(t))
        return Degree(group, delta.free + tuple(int(v) for v in t), delta.torsion)

    def to_dict(self) -> Dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank or not self.torsion else []
        parts.extend(f"Z/{m}" for m in self.torsion)
        return " + ".join(parts)


@dataclass(frozen=True)
class Degree:
    """An element of a DegreeGroup; torsion coordinates are kept reduced"""

    group: DegreeGroup
    free: Tuple[int, ...]
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.free) != self.group.free_rank or len(self.torsion) != len(self.group.torsion):
            raise BasymError(f"Coordinates {self.free}|{self.torsion} do not fit group {self.group}")
        object.__setattr__(self, "free", tuple(int(v) for v in self.free))
        object.__setattr__(
            self,
            "torsion",
            tuple(int(v) % m for v, m in zip(self.torsion, self.group.torsion)),
        )

    def require_group(self, group: DegreeGroup) -> None:
        if self.group != group:
            raise DegreeGroupMismatch(f"Degree {self} lives in {self.group}, expected {group}")

    def __add__(self, other: "Degree") -> "Degree":
        other.require_group(self.group)
        return Degree(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> "Degree":
        return Degree(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __sub__(self, other: "Degree") -> "Degree":
        return self + (-other)

    def __mul__(self, k: int) -> "Degree":
        return Degree(self.group, tuple(k * a for a in self.free), tuple(k * a for a in self.torsion))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def coordinates(self) -> Tuple[int, ...]:
        return self.free + self.torsion

    def to_list(self) -> List[int]:
        return list(self.coordinates())

    def split(self, s: int) -> Tuple["Degree", Tuple[int, ...]]:
        """Split an element of G x Z^s into (delta, t)"""
        base = self.group.base(s)
        cut = base.free_rank
        return Degree(base, self.free[:cut], self.torsion), self.free[cut:]

    def __str__(self) -> str:
        if self.group.free_rank == 1 and not self.torsion:
            return str(self.free[0])
        free = ",".join(str(a) for a in self.free)
        if self.torsion:
            return f"({free}|{','.join(str(a) for a in self.torsion)})"
        return f"({free})"


@dataclass(frozen=True)
class PositivityFunctional:
    """Linear functional on the free part of G"""

    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))

    @classmethod
    def default(cls, group: DegreeGroup) -> "PositivityFunctional":
        return cls((Fraction(1),) * group.free_rank)

    def __call__(self, degree: Degree) -> Fraction:
        if len(self.weights) != len(degree.free):
            raise DegreeGroupMismatch(
                f"Functional of length {len(self.weights)} applied to degree {degree}"
            )
        return sum((w * a for w, a in zip(self.weights, degree.free)), Fraction(0))

    def extend(self, s: int) -> "PositivityFunctional":
        return PositivityFunctional(self.weights + (Fraction(1),) * s)


def check_positivity(phi: PositivityFunctional, degrees: Iterable[Degree]) -> bool:
    """True iff phi is strictly positive on every degree"""
    return all(phi(d) > 0 for d in degrees)


def require_common_group(degrees: Sequence[Degree]) -> DegreeGroup:
    groups = {d.group for d in degrees}
    if len(groups) > 1:
        raise DegreeGroupMismatch(f"Degrees {[str(d) for d in degrees]} mix groups {groups}")
    return next(iter(groups))


# Integer normal form: A == S @ D @ T with S, T unimodular and D diagonal.


def _exgcd(a: int, b: int) -> np.ndarray:
    """2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0]"""
    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    M = np.array([[a, 1, 0], [b, 0, 1]], dtype=object)
    M = M[::-1]
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]

    g = M[0, 0]
    M = M[:, 1:].copy()
    M *= [a_sign, b_sign]
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def _normal_form(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonalize A by unimodular row/column operations; returns (D, Tinv)"""
    D = A.copy().astype(object)
    Tinv = np.eye(D.shape[1], dtype=object)

    def clear_row(i: int) -> bool:
        if (D[i, i + 1:] == 0).all():
            return False
        for j in range(i + 1, D.shape[1]):
            M = _exgcd(D[i, i], D[i, j]).T
            D[:, [i, j]] = D[:, [i, j]] @ M
            Tinv[:, [i, j]] = Tinv[:, [i, j]] @ M
        return True

    def clear_col(i: int) -> bool:
        if (D[i + 1:, i] == 0).all():
            return False
        for j in range(i + 1, D.shape[0]):
            M = _exgcd(D[i, i], D[j, i])
            D[[i, j]] = M @ D[[i, j]]
        return True

    for i in range(min(*D.shape)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass

    return D, Tinv


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis of {x in Z^ncols : matrix @ x = 0}"""
    if ncols == 0:
        return []
    if not matrix:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    A = np.array([[int(v) for v in row] for row in matrix], dtype=object)
    D, Tinv = _normal_form(A)
    diagonal = [D[i, i] if i < min(*D.shape) else 0 for i in range(ncols)]
    return [[int(v) for v in Tinv[:, i]] for i in range(ncols) if diagonal[i] == 0]


def hermite_rows(vectors: Iterable[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Row Hermite normal form: the canonical basis of the lattice spanned by vectors"""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    width = len(rows[0])
    basis: List[List[int]] = []
    pivots: List[int] = []

    for col in range(width):
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not active:
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            pivot = active[0]
            survivors = [pivot]
            for r in active[1:]:
                q = r[col] // pivot[col]
                reduced = [a - q * b for a, b in zip(r, pivot)]
                if reduced[col] != 0:
                    survivors.append(reduced)
                elif any(reduced):
                    rest.append(reduced)
            active = survivors
        pivot = active[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis.append(pivot)
        pivots.append(col)
        rows = rest

    for i, col in enumerate(pivots):
        for k in range(i):
            q = basis[k][col] // basis[i][col]
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]

    return [tuple(r) for r in basis]


def relation_lattice(degrees: Sequence[Degree]) -> List[Tuple[int, ...]]:
    """
    Basis of the integer relations among degrees.

    Returns vectors a with sum a_i * degrees_i = 0 in G generating all such
    relations; empty iff the degrees are linearly independent over Z.
    """
    if not degrees:
        return []
    group = require_common_group(degrees)
    k = len(degrees)
    r = len(group.torsion)

    # Free rows, then torsion rows augmented with one modulus column each.
    matrix = []
    for row in range(group.free_rank):
        matrix.append([d.free[row] for d in degrees] + [0] * r)
    for j, m in enumerate(group.torsion):
        matrix.append([d.torsion[j] for d in degrees] + [m if i == j else 0 for i in range(r)])

    kernel = integer_kernel(matrix, k + r)
    # Projection to the first k coordinates is injective on the kernel.
    basis = hermite_rows(v[:k] for v in kernel)
    logger.debug("relation lattice of %d degrees has rank %d", k, len(basis))
    return basis


def evaluate_relation(relation: Sequence[int], degrees: Sequence[Degree]) -> Degree:
    """sum relation_i * degrees_i"""
    total = degrees[0].group.zero()
    for a, d in zip(relation, degrees):
        total = total + a * d
    return total


def is_free_independent(E: Sequence[Degree]) -> bool:
    """True iff E is a basis of a free submonoid; the empty tuple is independent"""
    return not relation_lattice(tuple(E))


def delta_tuple(E: Sequence[Degree]) -> Tuple[Degree, ...]:
    """Consecutive differences (nu_2 - nu_1, ..., nu_s - nu_{s-1})"""
    return tuple(E[i + 1] - E[i] for i in range(len(E) - 1))


def augmented_blocks(blocks: Sequence[Sequence[Degree]], group: DegreeGroup) -> Tuple[Degree, ...]:
    """E_1 x {e_1} | ... | E_s x {e_s} as a tuple in G x Z^s"""
    s = len(blocks)
    out = []
    for i, block in enumerate(blocks):
        unit = tuple(int(i == j) for j in range(s))
        out.extend(group.embed(nu, unit) for nu in block)
    return tuple(out)
