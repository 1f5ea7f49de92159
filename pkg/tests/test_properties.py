"""
Randomized checks on seeded ideals

Run with --basym-seed N to replay a different corpus.
"""
import itertools

import pytest

from basym.asymptote import equigenerated_bounds
from basym.grading import DegreeGroup
from basym.homalg import (
    Presentation,
    free_resolution,
    graded_piece_dimension,
    koszul_tor_dimension,
    strand,
    tor_table,
)
from basym.polyalg import Ring, monomials_of_degree
from basym.rees import ReesSetup, power_presentation, rees_module_presentation
from basym.session import Session
from basym.stanley import module_support_decomposition, stanley_decomposition, toric_split
from basym.verify import verify_shape
from tests.factories import random_bigraded_ideal, random_homogeneous_ideal

CORPUS = 50
WCAP = 12


@pytest.fixture
def corpus(rng):
    """Seeded random homogeneous ideals as (ring, generators) pairs"""
    return [random_homogeneous_ideal(rng) for _ in range(CORPUS)]


@pytest.fixture
def equigenerated_corpus(rng):
    """(x, y)^2, (x^2, y^2) and seeded random ideals in two variables generated in a single degree"""
    ring = Ring(['x', 'y'], [1, 1])
    out = [
        (ring, [ring.parse(f) for f in ('x^2', 'x*y', 'y^2')]),
        (ring, [ring.parse('x^2'), ring.parse('y^2')]),
    ]
    for _ in range(3):
        d = rng.randint(1, 3)
        monomials = list(monomials_of_degree(ring, ring.group.degree(d)))
        chosen = rng.sample(monomials, rng.randint(1, len(monomials)))
        out.append((ring, [ring.monomial(e, rng.randint(1, 100)) for e in chosen]))
    return out


@pytest.fixture
def weighted_rings(rng):
    """The fiber ring of the power sums of degrees 2, 5, 8 and seeded weighted rings"""
    group = DegreeGroup(2)
    rings = [Ring(['T1', 'T2', 'T3'], [group.degree(a, 1) for a in (2, 5, 8)], group)]
    for _ in range(6):
        n = rng.randint(2, 3)
        rings.append(Ring(['x', 'y', 'z'][:n], [rng.randint(1, 4) for _ in range(n)]))
    for _ in range(3):
        rings.append(Ring(['T1', 'T2', 'T3'], [group.degree(rng.randint(1, 6), 1) for _ in range(3)], group))
    return rings


def _window(ring):
    """Degrees of monomials of phi-weight at most WCAP"""
    found = set()
    for e in itertools.product(range(WCAP + 1), repeat=ring.nvars):
        d = ring.monomial_degree(e)
        if ring.phi(d) <= WCAP:
            found.add(d)
    return found


@pytest.mark.slow
class TestHilbertProperties:
    """Test Hilbert functions computed two ways"""

    def test_standard_terms_match_linear_algebra(self, corpus):
        """Test counting standard terms agrees with ranks of relation matrices"""
        for ring, gens in corpus:
            p = Presentation.cyclic(ring, gens)
            for k in range(WCAP + 1):
                d = ring.group.degree(k)
                assert graded_piece_dimension(p, d) == p.hilbert(d), (gens, k)

    def test_stanley_conservation(self, corpus):
        """Test a Stanley decomposition counts every degree correctly"""
        for ring, gens in corpus:
            p = Presentation.cyclic(ring, gens)
            decomposition = stanley_decomposition(p.module, p.groebner.leads)
            for k in range(WCAP + 1):
                d = ring.group.degree(k)
                assert decomposition.dimension(d) == p.hilbert(d), (gens, k)


@pytest.mark.slow
class TestSupportProperties:
    """Test support decompositions against Hilbert functions"""

    def test_graded_support(self, corpus):
        """Test membership equals non-vanishing for Z-graded quotients"""
        for ring, gens in corpus:
            p = Presentation.cyclic(ring, gens)
            support = module_support_decomposition(p)
            for k in range(WCAP + 1):
                d = ring.group.degree(k)
                assert support.contains(d) == (p.hilbert(d) > 0), (gens, k)

    def test_bigraded_support(self, rng):
        """Test membership equals non-vanishing for Z^2-graded quotients"""
        for _ in range(4):
            ring, gens = random_bigraded_ideal(rng)
            p = Presentation.cyclic(ring, gens)
            support = module_support_decomposition(p)
            for a in range(WCAP + 1):
                for b in range(WCAP + 1 - a):
                    d = ring.group.degree(a, b)
                    assert support.contains(d) == (p.hilbert(d) > 0), (gens, a, b)


class TestToricSplitProperties:
    """Test supp k[Z] splits into disjoint shifted free submonoids"""

    def test_golden_split(self, weighted_rings):
        """Test the two pieces for degrees (2,1), (5,1), (8,1) are disjoint"""
        ring = weighted_rings[0]
        pieces = toric_split(ring, (0, 1, 2))
        assert len(pieces) == 2
        first, second = (c.elements(ring.phi, 40) for c in pieces)
        assert first and second
        assert not first & second

    def test_pieces_disjoint_and_covering(self, weighted_rings):
        """Test every variable subset of weighted rings"""
        for ring in weighted_rings:
            for size in range(1, ring.nvars + 1):
                for variables in itertools.combinations(range(ring.nvars), size):
                    sub = Ring(
                        [ring.names[i] for i in variables], [ring.degrees[i] for i in variables], ring.group
                    )
                    sets = [c.elements(ring.phi, WCAP) for c in toric_split(ring, variables)]
                    for p, q in itertools.combinations(range(len(sets)), 2):
                        assert not sets[p] & sets[q], (ring, variables)
                    assert set().union(*sets) == _window(sub), (ring, variables)

    def test_stanley_summands(self, rng, weighted_rings):
        """Test the splits used for Stanley summands of random monomial quotients"""
        for ring in weighted_rings[1:7]:
            gens = []
            for _ in range(rng.randint(1, 3)):
                e = tuple(rng.randint(0, 3) for _ in range(ring.nvars))
                gens.append(ring.monomial(e if any(e) else (1,) + e[1:]))
            p = Presentation.cyclic(ring, gens)
            for summand in stanley_decomposition(p.module, p.groebner.leads):
                sets = [c.elements(ring.phi, WCAP) for c in toric_split(ring, summand.variables)]
                for a, b in itertools.combinations(sets, 2):
                    assert not a & b, (ring, summand.variables)


@pytest.mark.slow
class TestResolutionProperties:
    """Test resolutions are minimal complexes with the right homology"""

    def test_minimal_complex(self, corpus):
        """Test d o d = 0, minimality and supp Tor_i inside the shifts of F_i"""
        for ring, gens in corpus:
            p = Presentation.cyclic(ring, gens)
            c = free_resolution(p)
            assert c.is_complex(), gens
            assert c.is_minimal(), gens
            table = tor_table(p)
            for i in range(len(c.modules)):
                assert set(table.support(i)) <= set(c.shifts(i)), (gens, i)

    def test_koszul_cross_check(self, corpus):
        """Test Betti numbers against Koszul homology"""
        for ring, gens in corpus[:3]:
            p = Presentation.cyclic(ring, gens)
            c = free_resolution(p)
            table = tor_table(p)
            for i in range(ring.nvars + 1):
                for k in range(WCAP + 1):
                    d = ring.group.degree(k)
                    dim = koszul_tor_dimension(p, i, d)
                    assert dim == table[(i, d)], (gens, i, k)
                    if dim:
                        assert d in c.shifts(i), (gens, i, k)

    def test_strand_shift_containment(self, equigenerated_corpus):
        """Test supp Tor_i(I^t) lies among the shifts of the Rees strand resolving I^t"""
        for ring, gens in equigenerated_corpus:
            setup = ReesSetup(ring, [gens])
            resolution = free_resolution(rees_module_presentation(None, setup))
            for t in range(4):
                c = strand(resolution, (t,), ring)
                table = tor_table(power_presentation(setup, (t,)))
                for i in table.indices():
                    assert set(table.support(i)) <= set(c.shifts(i)), (gens, t, i)


class TestBoundProperties:
    """Test supports of powers stay inside the equigenerated bounds"""

    def test_shift_containment(self, equigenerated_corpus):
        """Test supp Tor_i(I^t) lies in Delta_i + t gamma for t = 0..4"""
        for ring, gens in equigenerated_corpus:
            report = equigenerated_bounds(ring, [gens], max_i=2)
            setup = ReesSetup(ring, [gens])
            for t in range(5):
                table = tor_table(power_presentation(setup, (t,)), 2)
                for i in range(3):
                    assert set(table.support(i)) <= report.bound_at(i, (t,)), (gens, i, t)


@pytest.mark.slow
class TestShapeProperties:
    """Test predicted shapes against the oracle on random ideals"""

    def test_predictions(self, rng):
        """Test Tor_0 and Tor_1 predictions in two variables"""
        for _ in range(3):
            ring, gens = random_homogeneous_ideal(rng, nvars=2, max_degree=3)
            session = Session(ring, t_range=(1, 2), wcap=WCAP)
            session.register_ideal('I', gens)
            report = verify_shape(session, [0, 1])
            assert report.ok, [e.to_dict() for e in report.mismatches()]
