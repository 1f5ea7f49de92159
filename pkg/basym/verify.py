"""
Oracle sweep and reports

``verify_shape`` compares the predicted supports of Tor_ell(M I^t, k) with
Betti tables computed directly from M I^t, power by power. ``run`` drives
every command and returns a JSON-ready report.
"""
from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from django.core.cache import cache

from .asymptote import AsymptoticShape, asymptotic_tor_shape, equigenerated_report, fiber_complex
from .cli import COMMANDS
from .conf import get_config, resolve_threads
from .exceptions import BasymError
from .grading import Degree
from .groebner import buchberger
from .homalg import BettiTable, Presentation, tor_table
from .rees import power_presentation, rees_ideal
from .session import Session
from .stanley import (
    module_support_decomposition,
    stanley_decomposition,
    toric_degree_ideal,
)

logger = logging.getLogger(__name__)


def _cache_key(session: Session, t: Sequence[int], max_i: int) -> str:
    return f"basym:betti:{session.digest()}:{','.join(str(v) for v in t)}:{max_i}"


def oracle_betti(session: Session, t: Sequence[int], max_i: int) -> BettiTable:
    """Betti table of M I^t up to index max_i, memoized in the Django cache"""
    t = tuple(int(v) for v in t)
    key = _cache_key(session, t, max_i)
    ring = session.ring
    cached = cache.get(key)
    if cached is not None:
        logger.debug("oracle cache hit for t=%s", t)
        entries = {(i, ring.group.degree(coords)): n for i, coords, n in cached}
        return BettiTable(ring, entries)

    setup = session.rees_setup()
    table = tor_table(power_presentation(setup, t, session.module), max_i)
    cache.set(
        key,
        [(i, d.to_list(), n) for (i, d), n in sorted(table.entries.items(), key=lambda kv: (kv[0][0], kv[0][1].coordinates()))],
        get_config()["cache_timeout"],
    )
    return table


def oracle_sweep(
    session: Session, ts: Sequence[Tuple[int, ...]], max_i: int, threads: Optional[int] = None
) -> Dict[Tuple[int, ...], BettiTable]:
    """Oracle Betti tables for every t, computed on a worker pool"""
    ts = sorted(set(tuple(t) for t in ts))
    workers = resolve_threads(threads)
    logger.info("oracle sweep over %d powers with %d workers", len(ts), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        tables = list(pool.map(lambda t: oracle_betti(session, t, max_i), ts))
    return dict(zip(ts, tables))


@dataclass
class VerificationEntry:
    ell: int
    t: Tuple[int, ...]
    predicted: List[Degree]
    oracle: List[Degree]

    @property
    def match(self) -> bool:
        return self.predicted == self.oracle

    def to_dict(self) -> Dict:
        return {
            "ell": self.ell,
            "t": list(self.t),
            "predicted": [d.to_list() for d in self.predicted],
            "oracle": [d.to_list() for d in self.oracle],
            "match": self.match,
        }


@dataclass
class VerificationReport:
    """Predicted against oracle supports per (ell, t) on a window"""

    wcap: int
    entries: List[VerificationEntry] = field(default_factory=list)
    thresholds: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    shapes: Dict[int, AsymptoticShape] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(e.match for e in self.entries)

    def mismatches(self) -> List[VerificationEntry]:
        return [e for e in self.entries if not e.match]

    def to_dict(self) -> Dict:
        return {
            "ok": self.ok,
            "wcap": self.wcap,
            "thresholds": {str(ell): list(t) for ell, t in sorted(self.thresholds.items())},
            "shapes": {str(ell): shape.to_dict() for ell, shape in sorted(self.shapes.items())},
            "entries": [e.to_dict() for e in self.entries],
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
        }

    def tsv_rows(self) -> List[Tuple]:
        """One row per (ell, t, degree): predicted and oracle membership flags"""
        rows = []
        for e in self.entries:
            predicted, oracle = set(e.predicted), set(e.oracle)
            for d in _ordered(predicted | oracle, None):
                rows.append(
                    (
                        e.ell,
                        ",".join(str(v) for v in e.t),
                        ",".join(str(v) for v in d.to_list()),
                        int(d in predicted),
                        int(d in oracle),
                    )
                )
        return rows


def _ordered(degrees: Set[Degree], phi) -> List[Degree]:
    if phi is None:
        return sorted(degrees, key=lambda d: d.coordinates())
    return sorted(degrees, key=lambda d: (phi(d), d.coordinates()))


def window_grid(session: Session, threshold: Sequence[int], t_range=None) -> List[Tuple[int, ...]]:
    """Per block, [max(a, threshold_i) .. max(b, threshold_i)]"""
    a, b = t_range or session.t_range
    ranges = [range(max(a, th), max(b, th) + 1) for th in threshold]
    return [tuple(t) for t in itertools.product(*ranges)]


def verify_shape(
    session: Session,
    ells: Sequence[int],
    t_range: Optional[Tuple[int, int]] = None,
    wcap: Optional[int] = None,
    threads: Optional[int] = None,
) -> VerificationReport:
    """Compare the asymptotic shapes for ``ells`` with the oracle on the window"""
    ells = sorted(set(int(e) for e in ells))
    if not ells:
        raise BasymError("verify needs at least one homological index")
    wcap = session.wcap if wcap is None else int(wcap)
    phi = session.ring.phi
    report = VerificationReport(wcap)

    started = time.perf_counter()
    setup = session.rees_setup()
    fiber = fiber_complex(setup, session.module, max(ells) + 1)
    grids: Dict[int, List[Tuple[int, ...]]] = {}
    for ell in ells:
        shape = asymptotic_tor_shape(session.ring, session.ideals, session.module, ell, fiber=fiber)
        report.shapes[ell] = shape
        report.thresholds[ell] = shape.threshold
        grids[ell] = window_grid(session, shape.threshold, t_range)
    report.timings["shape"] = time.perf_counter() - started

    started = time.perf_counter()
    all_ts = [t for grid in grids.values() for t in grid]
    tables = oracle_sweep(session, all_ts, max(ells), threads)
    report.timings["oracle"] = time.perf_counter() - started

    for ell in ells:
        for t in grids[ell]:
            predicted = report.shapes[ell].support_at(t, wcap, phi)
            oracle = {d for d in tables[t].support(ell) if phi(d) <= wcap}
            entry = VerificationEntry(ell, t, _ordered(predicted, phi), _ordered(oracle, phi))
            if not entry.match:
                logger.warning("mismatch at ell=%d t=%s", ell, t)
            report.entries.append(entry)
    return report


# Command reports


def betti_report(session: Session, max_i: int, t_range=None, threads=None) -> Dict:
    ts = session.t_grid(t_range)
    tables = oracle_sweep(session, ts, max_i, threads)
    return {
        ",".join(str(v) for v in t): tables[t].to_dict() for t in sorted(tables)
    }


def rees_report(session: Session) -> Dict:
    setup = session.rees_setup()
    return {
        "setup": setup.to_dict(),
        "rees_ideal": [str(f) for f in rees_ideal(setup)],
    }


def stanley_report(session: Session, module: Optional[str] = None) -> Dict:
    """Support decomposition of a declared module, and of the toric quotient of the fiber ring"""
    name = module or session.use
    if name is not None:
        presentation = session.get_module(name).presentation(session.ring)
    else:
        presentation = Presentation.cyclic(session.ring)
    stanley = stanley_decomposition(presentation.module, presentation.groebner.leads)
    report = {
        "module": name or "S",
        "stanley": stanley.to_dict(),
        "support": module_support_decomposition(presentation).to_dict(),
    }
    if session.s:
        B = session.rees_setup().fiber_ring
        binomials = toric_degree_ideal(B.degrees, B)
        toric = Presentation.cyclic(B, binomials)
        initial = Presentation.cyclic(B, [B.monomial(g.lead_exponents()) for g in binomials])
        report["toric"] = {
            "binomials": [str(g) for g in binomials],
            "initial_stanley": stanley_decomposition(initial.module, initial.groebner.leads).to_dict(),
            "support": module_support_decomposition(toric).to_dict(),
        }
    return report


def gb_report(session: Session, ideal: Optional[str] = None) -> Dict:
    name = ideal or (session.ideal_names[0] if session.ideal_names else None)
    if name is None:
        raise BasymError("The session declares no ideal")
    gens = session.get_ideal(name).generators
    gb = buchberger(list(gens))
    return {"ideal": name, "order": session.ring.order.to_text(), "basis": [str(g) for g in gb.polynomials()]}


def run(
    command: str,
    session: Session,
    ell: Optional[int] = None,
    t_range: Optional[Tuple[int, int]] = None,
    wcap: Optional[int] = None,
    threads: Optional[int] = None,
    module: Optional[str] = None,
    ideal: Optional[str] = None,
):
    """Run one command on a session; returns a dict, or a VerificationReport for verify"""
    if command not in COMMANDS:
        raise BasymError(f"Unknown command '{command}', expected one of {', '.join(COMMANDS)}")
    logger.info("running %s on session %s", command, session.digest()[:12])

    if command == "betti":
        max_i = session.ring.nvars if ell is None else ell
        return betti_report(session, max_i, t_range, threads)
    if command == "rees":
        return rees_report(session)
    if command == "stanley":
        return stanley_report(session, module)
    if command == "gb":
        return gb_report(session, ideal)
    if command == "shape":
        shape = asymptotic_tor_shape(session.ring, session.ideals, session.module, ell or 0)
        data = shape.to_dict(session.wcap if wcap is None else wcap)
        data["window"] = {"t": list(t_range or session.t_range), "wcap": session.wcap if wcap is None else wcap}
        return data
    if command == "bounds":
        max_i = 2 if ell is None else ell
        return equigenerated_report(session.ring, session.ideals, session.module, max_i).to_dict()
    return verify_shape(session, [ell or 0], t_range, wcap, threads)
