"""
Asymptotic shape of Tor supports of M I_1^t_1 ... I_s^t_s

The general pipeline resolves the Rees module M R over R = S[T], sets the
x-variables to zero and decomposes the support of the homology over B = k[T].
Each component (theta, E) of that support is a component (delta, t_p, E_p)
of the eventual shape once theta = (delta, t_p) and E is split into blocks by
the Z^s-degrees of the T-variables.

For equigenerated ideals the shifted grading gives the finite sets of
G-degrees Delta_i, their eventually non-vanishing part and the Hilbert
polynomials of the strands.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import sympy
from sympy import Matrix, Rational

from .conf import get_config
from .exceptions import BasymError, FitError
from .grading import Degree, augmented_blocks, delta_tuple, is_free_independent
from .homalg import (
    GradedComplex,
    Presentation,
    free_resolution,
    subquotient_presentation,
)
from .polyalg import FreeModuleElement, Polynomial, Ring
from .rees import ReesSetup, rees_module_presentation
from .stanley import SupportComponent, SupportDecomposition, module_support_decomposition

logger = logging.getLogger(__name__)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for a in range(total, -1, -1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def _z_block(degree: Degree, s: int) -> Optional[int]:
    """Index i when the Z^s-part of degree is e_i"""
    _, t = degree.split(s)
    if sorted(t) == [0] * (s - 1) + [1]:
        return t.index(1)
    return None


@dataclass(frozen=True)
class ShapeComponent:
    """delta + union over |c_i| = t_i - t0_i of sum_i c_i . blocks_i"""

    delta: Degree
    t0: Tuple[int, ...]
    blocks: Tuple[Tuple[Degree, ...], ...]

    def support_at(self, t: Sequence[int]) -> Set[Degree]:
        steps = [ti - si for ti, si in zip(t, self.t0)]
        if any(k < 0 for k in steps):
            return set()
        per_block: List[Set[Degree]] = []
        for k, block in zip(steps, self.blocks):
            if not block:
                per_block.append({self.delta.group.zero()} if k == 0 else set())
                continue
            sums = set()
            for c in _compositions(k, len(block)):
                total = self.delta.group.zero()
                for a, nu in zip(c, block):
                    total = total + a * nu
                sums.add(total)
            per_block.append(sums)
        out = set()
        for choice in itertools.product(*per_block):
            total = self.delta
            for d in choice:
                total = total + d
            out.add(total)
        return out

    @property
    def complete(self) -> bool:
        return all(self.blocks)

    def independence(self) -> Tuple[bool, bool]:
        """Independence of the concatenated consecutive differences and of the augmented blocks"""
        diffs: List[Degree] = []
        for block in self.blocks:
            diffs.extend(delta_tuple(block))
        return (
            is_free_independent(diffs) if diffs else True,
            is_free_independent(augmented_blocks(self.blocks, self.delta.group)),
        )

    def to_dict(self) -> Dict:
        return {
            "delta": self.delta.to_list(),
            "t0": list(self.t0),
            "blocks": [[nu.to_list() for nu in block] for block in self.blocks],
        }


def split_component(component: SupportComponent, s: int) -> ShapeComponent:
    delta, t0 = component.shift.split(s)
    blocks: List[List[Degree]] = [[] for _ in range(s)]
    for nu in component.generators:
        i = _z_block(nu, s)
        if i is None:
            raise BasymError(f"Generator {nu} does not have Z^{s}-degree a unit vector")
        blocks[i].append(nu.split(s)[0])
    return ShapeComponent(delta, tuple(t0), tuple(tuple(b) for b in blocks))


@dataclass
class AsymptoticShape:
    """Components describing supp Tor_ell(M I^t, k) for t at or above the threshold"""

    ell: int
    s: int
    components: List[ShapeComponent]
    threshold: Tuple[int, ...]
    certificate: SupportDecomposition
    homology: Presentation
    dropped: List[ShapeComponent] = field(default_factory=list)

    def support_at(self, t: Sequence[int], wcap=None, phi=None) -> Set[Degree]:
        """Predicted support; exact for t at or above the threshold"""
        out: Set[Degree] = set()
        for c in self.components:
            out |= c.support_at(t)
        return _cap(out, wcap, phi)

    def certificate_support_at(self, t: Sequence[int], wcap=None, phi=None) -> Set[Degree]:
        """Support read off the raw certificate; exact for every t >= 0"""
        out: Set[Degree] = set()
        for c in list(self.components) + list(self.dropped):
            out |= c.support_at(t)
        return _cap(out, wcap, phi)

    def overlaps(self, wcap) -> List[Tuple[int, int]]:
        return self.certificate.overlaps(wcap)

    def to_dict(self, wcap=None) -> Dict:
        data = {
            "ell": self.ell,
            "threshold": list(self.threshold),
            "components": [c.to_dict() for c in self.components],
            "certificate": self.certificate.to_dict(),
        }
        if wcap is not None:
            data["overlaps"] = [list(pair) for pair in self.overlaps(wcap)]
        return data


def _cap(degrees: Set[Degree], wcap, phi) -> Set[Degree]:
    if wcap is None:
        return degrees
    return {d for d in degrees if phi(d) <= wcap}


def safe_threshold(kept: Sequence[ShapeComponent], dropped: Sequence[ShapeComponent], s: int) -> Tuple[int, ...]:
    """Max of t0 over kept components and of t0_i + 1 over dropped ones with empty block i"""
    threshold = [0] * s
    for c in kept:
        threshold = [max(a, b) for a, b in zip(threshold, c.t0)]
    for c in dropped:
        for i, block in enumerate(c.blocks):
            if not block:
                threshold[i] = max(threshold[i], c.t0[i] + 1)
    return tuple(threshold)


def fiber_complex(setup: ReesSetup, module: Optional[Presentation], length: int) -> GradedComplex:
    """Minimal R-resolution of M R up to F_length with the x-variables set to zero"""
    presentation = rees_module_presentation(module, setup)
    resolution = free_resolution(presentation, length=length)
    logger.info(
        "rees module resolution ranks %s", [m.rank for m in resolution.modules]
    )
    return resolution.transfer(setup.fiber_ring)


def _decompose(presentation: Presentation) -> SupportDecomposition:
    if presentation.module.rank == 0:
        return SupportDecomposition(presentation.ring.phi, [])
    return module_support_decomposition(presentation)


def asymptotic_tor_shape(
    base: Ring,
    ideals: Sequence[Sequence[Polynomial]],
    module: Optional[Presentation] = None,
    ell: int = 0,
    fiber: Optional[GradedComplex] = None,
) -> AsymptoticShape:
    """
    Eventual shape of supp Tor_ell(M I_1^t_1 ... I_s^t_s, k).

    ``fiber`` may carry a precomputed fiber_complex of length at least
    ell + 1 so several indices share one resolution.
    """
    if ell < 0:
        raise BasymError(f"Homological index must be non-negative, got {ell}")
    setup = ReesSetup(base, ideals)
    if fiber is None:
        fiber = fiber_complex(setup, module, ell + 1)
    homology = subquotient_presentation(fiber, ell)
    certificate = _decompose(homology)

    kept: List[ShapeComponent] = []
    dropped: List[ShapeComponent] = []
    for component in certificate:
        shape = split_component(component, setup.s)
        (kept if shape.complete else dropped).append(shape)

    for c in kept:
        diffs_ok, augmented_ok = c.independence()
        if not (diffs_ok and augmented_ok):
            raise BasymError(f"Component {c.to_dict()} has dependent generator blocks")

    threshold = safe_threshold(kept, dropped, setup.s)
    logger.info(
        "shape of Tor_%d: %d components, %d dropped, threshold %s",
        ell,
        len(kept),
        len(dropped),
        threshold,
    )
    return AsymptoticShape(ell, setup.s, kept, threshold, certificate, homology, dropped)


# Eventual positivity


@dataclass(frozen=True)
class Positivity:
    eventually_nonzero: bool
    threshold: Tuple[int, ...]

    @property
    def classification(self) -> str:
        return "eventually_nonzero" if self.eventually_nonzero else "eventually_zero"

    def to_dict(self) -> Dict:
        return {"classification": self.classification, "threshold": list(self.threshold)}


def eventual_positivity(presentation: Presentation, s: Optional[int] = None) -> Positivity:
    """
    Classify t -> M_(*, t) as eventually zero or eventually non-zero.

    A component whose generators reach every block covers a translated
    orthant t0 + N^s. Finitely many components each missing a block only
    cover slices with a bounded coordinate, and such slices never contain a
    translated orthant, so the module is eventually non-zero exactly when one
    component covers all blocks.
    """
    s = presentation.ring.group.free_rank if s is None else s
    decomposition = _decompose(presentation)
    kept, dropped = [], []
    for component in decomposition:
        shape = split_component(component, s)
        (kept if shape.complete else dropped).append(shape)

    if kept:
        best = min(kept, key=lambda c: (sum(c.t0), c.t0))
        return Positivity(True, best.t0)
    return Positivity(False, safe_threshold([], dropped, s))


# Hilbert polynomials


@dataclass(frozen=True)
class HilbertPolynomial:
    expr: sympy.Expr
    symbols: Tuple[sympy.Symbol, ...]
    start: Tuple[int, ...]

    def __call__(self, t: Sequence[int]) -> Rational:
        return self.expr.subs(dict(zip(self.symbols, t)))

    def __str__(self) -> str:
        return str(self.expr)

    def to_dict(self) -> Dict:
        return {"polynomial": str(self.expr), "start": list(self.start)}


def _exponent_vectors(s: int, degree: int) -> List[Tuple[int, ...]]:
    out = []
    for total in range(degree + 1):
        out.extend(_compositions(total, s))
    return out


def strand_hilbert_polynomial(
    presentation: Presentation,
    delta: Optional[Degree] = None,
    s: Optional[int] = None,
    direction: Optional[Sequence[Degree]] = None,
    start: Optional[Sequence[int]] = None,
    retries: Optional[int] = None,
    holdout: Optional[int] = None,
) -> HilbertPolynomial:
    """
    dim_k M_(delta + sum t_i direction_i, t) as a polynomial in t.

    The polynomial is interpolated exactly on start + {0..D}^s with D the
    number of ring variables minus one, then checked on held-out points along
    each axis and the diagonal. A failed check moves the grid one step
    further out; after ``retries`` moves FitError is raised.
    """
    config = get_config()
    retries = config["fit_retries"] if retries is None else retries
    holdout = config["fit_holdout"] if holdout is None else holdout

    ring = presentation.ring
    s = ring.group.free_rank if s is None else s
    base_group = ring.group.base(s)
    delta = base_group.zero() if delta is None else delta
    direction = tuple(direction) if direction is not None else (base_group.zero(),) * s
    if start is None:
        start = eventual_positivity(presentation, s).threshold
    start = tuple(int(v) for v in start)

    D = max(ring.nvars - 1, 0)
    exponents = _exponent_vectors(s, D)
    symbols = tuple(sympy.symbols(" ".join(f"t{i + 1}" for i in range(s)) if s > 1 else "t", seq=True))
    cache: Dict[Tuple[int, ...], int] = {}

    def dim(t: Tuple[int, ...]) -> int:
        if t not in cache:
            g = delta
            for ti, d in zip(t, direction):
                g = g + ti * d
            cache[t] = presentation.hilbert(base_group.embed(g, t))
        return cache[t]

    for attempt in range(retries + 1):
        t0 = tuple(v + attempt for v in start)
        grid = [tuple(a + b for a, b in zip(t0, off)) for off in itertools.product(range(D + 1), repeat=s)]
        A = Matrix([[sympy.prod([Rational(ti) ** a for ti, a in zip(t, alpha)]) for alpha in exponents] for t in grid])
        b = Matrix([dim(t) for t in grid])
        try:
            solution, params = A.gauss_jordan_solve(b)
        except ValueError:
            logger.debug("hilbert fit at %s: no interpolating polynomial", t0)
            continue
        solution = solution.subs({p: 0 for p in params})
        expr = sympy.expand(
            sum(
                (c * sympy.prod([x**a for x, a in zip(symbols, alpha)]) for c, alpha in zip(solution, exponents)),
                sympy.Integer(0),
            )
        )
        poly = HilbertPolynomial(expr, symbols, t0)

        checks = []
        for k in range(holdout):
            far = D + 1 + k
            for i in range(s):
                checks.append(tuple(v + (far if j == i else 0) for j, v in enumerate(t0)))
            checks.append(tuple(v + far for v in t0))
        if all(poly(t) == dim(t) for t in checks):
            logger.debug("hilbert polynomial %s from t0=%s", expr, t0)
            return poly
        logger.debug("hilbert fit at %s failed on held-out points", t0)

    raise FitError(
        f"No Hilbert polynomial of degree <= {D} fits beyond t0={start} after {retries} retries"
    )


# Equigenerated bounds


@dataclass
class EquigeneratedReport:
    """
    Delta_i, Delta_i' and per-strand data for equigenerated ideals.

    ``candidates`` holds the G-parts of all shifts of the minimal R-resolution;
    ``deltas`` keeps those whose strand of H_i(F (x) B) is non-zero.
    """

    gammas: Tuple[Degree, ...]
    candidates: Dict[int, List[Degree]]
    deltas: Dict[int, List[Degree]] = field(default_factory=dict)
    strands: Dict[Tuple[int, Degree], Presentation] = field(default_factory=dict)
    delta_prime: Dict[int, List[Degree]] = field(default_factory=dict)
    positivity: Dict[Tuple[int, Degree], Positivity] = field(default_factory=dict)
    polynomials: Dict[Tuple[int, Degree], HilbertPolynomial] = field(default_factory=dict)

    def bound_at(self, i: int, t: Sequence[int]) -> Set[Degree]:
        """Delta_i + sum t_j gamma_j"""
        offset = self.gammas[0].group.zero()
        for tj, gamma in zip(t, self.gammas):
            offset = offset + tj * gamma
        return {eta + offset for eta in self.deltas.get(i, [])}

    def to_dict(self) -> Dict:
        out = {"gammas": [g.to_list() for g in self.gammas], "indices": {}}
        for i, etas in sorted(self.deltas.items()):
            entry = {
                "candidates": [eta.to_list() for eta in self.candidates.get(i, [])],
                "delta": [eta.to_list() for eta in etas],
                "delta_prime": [eta.to_list() for eta in self.delta_prime.get(i, [])],
                "strands": [],
            }
            for eta in etas:
                strand = {"eta": eta.to_list()}
                if (i, eta) in self.positivity:
                    strand.update(self.positivity[(i, eta)].to_dict())
                if (i, eta) in self.polynomials:
                    strand["hilbert"] = self.polynomials[(i, eta)].to_dict()
                entry["strands"].append(strand)
            out["indices"][str(i)] = entry
        return out


def strand_module(homology: Presentation, eta: Degree, s: int) -> Presentation:
    """The summand of a B-module in G-degree eta, B generated in G-degree zero"""
    module = homology.module
    keep = [k for k, d in enumerate(module.shifts) if d.split(s)[0] == eta]
    index = {k: n for n, k in enumerate(keep)}
    target = homology.ring.free_module([module.shifts[k] for k in keep])
    relations = []
    for r in homology.relations:
        if r.degree().split(s)[0] != eta:
            continue
        relations.append(
            FreeModuleElement(target, {(index[pos], e): c for (pos, e), c in r.terms.items()})
        )
    return Presentation(target, relations)


def equigenerated_bounds(
    base: Ring,
    ideals: Sequence[Sequence[Polynomial]],
    module: Optional[Presentation] = None,
    max_i: int = 2,
) -> EquigeneratedReport:
    """
    Delta_i for i <= max_i in the shifted grading.

    supp Tor_i(M I^t, k) lies in Delta_i + sum t_j gamma_j for every t >= 0.
    """
    setup = ReesSetup(base, ideals, shifted=True)
    presentation = rees_module_presentation(module, setup)
    resolution = free_resolution(presentation, length=max_i + 1)
    fiber = resolution.transfer(setup.fiber_ring)
    phi = base.phi
    order = lambda d: (phi(d), d.coordinates())  # noqa: E731

    report = EquigeneratedReport(setup.gammas, {})
    for i in range(max_i + 1):
        candidates = sorted({d.split(setup.s)[0] for d in resolution.shifts(i)}, key=order)
        report.candidates[i] = candidates
        homology = subquotient_presentation(fiber, i)
        report.deltas[i] = []
        for eta in candidates:
            strand = strand_module(homology, eta, setup.s)
            if not strand.is_zero():
                report.deltas[i].append(eta)
                report.strands[(i, eta)] = strand
        logger.info("Delta_%d = %s", i, [str(eta) for eta in report.deltas[i]])
    return report


def equigenerated_report(
    base: Ring,
    ideals: Sequence[Sequence[Polynomial]],
    module: Optional[Presentation] = None,
    max_i: int = 2,
    fit: bool = True,
) -> EquigeneratedReport:
    """Delta_i with eventual positivity (Delta_i') and a Hilbert polynomial per strand"""
    report = equigenerated_bounds(base, ideals, module, max_i)
    s = len(report.gammas)
    for i, etas in report.deltas.items():
        prime = []
        for eta in etas:
            strand = report.strands[(i, eta)]
            positivity = eventual_positivity(strand, s)
            report.positivity[(i, eta)] = positivity
            if positivity.eventually_nonzero:
                prime.append(eta)
            if fit:
                report.polynomials[(i, eta)] = strand_hilbert_polynomial(
                    strand, eta, s, start=positivity.threshold
                )
        report.delta_prime[i] = prime
    return report
