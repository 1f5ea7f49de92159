"""
Tests for Stanley decompositions, toric ideals and supports
"""
import pytest

from basym.exceptions import AmbientMismatch
from basym.grading import DegreeGroup
from basym.homalg import Presentation
from basym.polyalg import Ring
from basym.stanley import (
    SupportComponent,
    module_support_decomposition,
    stanley_decomposition,
    support_membership,
    toric_degree_ideal,
    toric_split,
)


@pytest.fixture
def fiber_ring():
    """k[T1, T2, T3] with degrees (2,1), (5,1), (8,1)"""
    group = DegreeGroup(2)
    degrees = [group.degree(2, 1), group.degree(5, 1), group.degree(8, 1)]
    return Ring(['T1', 'T2', 'T3'], degrees, group)


class TestStanleyDecomposition:
    """Test Stanley decompositions of monomial quotients"""

    def test_small_quotient(self, ring_xy):
        """Test k[x, y]/(x^2, x*y) = k[y] + x k"""
        p = Presentation.cyclic(ring_xy, [ring_xy.parse('x^2'), ring_xy.parse('x*y')])
        decomposition = stanley_decomposition(p.module, p.groebner.leads)
        assert str(decomposition) == '1*e1*k[y] ++ x*e1*k[]'
        assert decomposition.dimension(ring_xy.group.degree(1)) == 2
        assert decomposition.dimension(ring_xy.group.degree(2)) == 1

    def test_free_module(self, ring_xy):
        """Test a free module is one piece per generator"""
        p = Presentation.free(ring_xy, [ring_xy.group.degree(0), ring_xy.group.degree(2)])
        decomposition = stanley_decomposition(p.module, [])
        assert len(decomposition) == 2
        assert [s.degree.to_list() for s in decomposition] == [[0], [2]]

    def test_conservation(self, ring_xyz):
        """Test summand counts match the Hilbert function"""
        p = Presentation.cyclic(
            ring_xyz, [ring_xyz.parse(f) for f in ('x^2 - y*z', 'x*y', 'z^3')]
        )
        decomposition = stanley_decomposition(p.module, p.groebner.leads)
        for k in range(7):
            d = ring_xyz.group.degree(k)
            assert decomposition.dimension(d) == p.hilbert(d)

    def test_to_dict(self, ring_xy):
        """Test the JSON form"""
        p = Presentation.cyclic(ring_xy, [ring_xy.parse('x')])
        data = stanley_decomposition(p.module, p.groebner.leads).to_dict()
        assert data == [{'position': 0, 'monomial': '1', 'variables': ['y'], 'degree': [0]}]


class TestToricIdeal:
    """Test toric degree ideals"""

    def test_golden_degrees(self, fiber_ring):
        """Test the toric ideal of (2,1), (5,1), (8,1)"""
        binomials = toric_degree_ideal(fiber_ring.degrees, fiber_ring)
        assert [str(g) for g in binomials] == ['T2^2 - T1*T3']

    def test_independent(self):
        """Test independent degrees give the zero ideal"""
        group = DegreeGroup(2)
        assert toric_degree_ideal([group.degree(1, 0), group.degree(0, 1)]) == []

    def test_equal_degrees(self, ring_xy):
        """Test two variables of the same degree"""
        assert [str(g) for g in toric_degree_ideal(ring_xy.degrees, ring_xy)] == ['x - y']

    def test_wrong_ring(self, fiber_ring, ring_xy):
        """Test degrees that differ from the ring's"""
        with pytest.raises(AmbientMismatch):
            toric_degree_ideal(ring_xy.degrees, fiber_ring)

    def test_toric_split(self, fiber_ring):
        """Test supp k[T1, T3] is one free monoid"""
        pieces = toric_split(fiber_ring, (0, 2))
        assert [c.to_dict() for c in pieces] == [{'shift': [0, 0], 'generators': [[2, 1], [8, 1]]}]


class TestSupportComponent:
    """Test shifted free submonoids"""

    def test_contains(self):
        """Test membership by exact solving"""
        group = DegreeGroup(2)
        c = SupportComponent(group.zero(), (group.degree(2, 1),))
        assert c.contains(group.degree(4, 2))
        assert not c.contains(group.degree(3, 1))
        assert not c.contains(group.degree(-2, -1))

    def test_contains_torsion(self):
        """Test torsion coordinates must match exactly"""
        group = DegreeGroup(1, (2,))
        c = SupportComponent(group.zero(), (group.degree(1, 1),))
        assert c.contains(group.degree(2, 0))
        assert not c.contains(group.degree(2, 1))

    def test_dependent_generators(self):
        """Test dependent generators are rejected"""
        group = DegreeGroup(1)
        c = SupportComponent(group.zero(), (group.degree(1), group.degree(2)))
        with pytest.raises(AmbientMismatch):
            c.contains(group.degree(3))

    def test_elements(self, fiber_ring):
        """Test enumeration up to a weight cap"""
        group = fiber_ring.group
        c = SupportComponent(group.zero(), (group.degree(2, 1),))
        found = c.elements(fiber_ring.phi, 6)
        assert sorted(d.to_list() for d in found) == [[0, 0], [2, 1], [4, 2]]


class TestSupportDecomposition:
    """Test supports of modules"""

    def test_golden_quotient(self, fiber_ring):
        """Test supp B/(T2^2) = (0 + <E>) u ((5,1) + <E>)"""
        p = Presentation.cyclic(fiber_ring, [fiber_ring.parse('T2^2')])
        decomposition = module_support_decomposition(p)
        assert decomposition.to_dict() == [
            {'shift': [0, 0], 'generators': [[2, 1], [8, 1]]},
            {'shift': [5, 1], 'generators': [[2, 1], [8, 1]]},
        ]
        assert decomposition.overlaps(30) == []

    def test_toric_quotient(self, fiber_ring):
        """Test the fiber ring modulo its toric ideal has the same support"""
        binomials = toric_degree_ideal(fiber_ring.degrees, fiber_ring)
        p = Presentation.cyclic(fiber_ring, binomials)
        assert len(module_support_decomposition(p)) == 2

    def test_support_equality(self, fiber_ring):
        """Test membership agrees with non-vanishing graded pieces"""
        p = Presentation.cyclic(fiber_ring, [fiber_ring.parse('T2^2'), fiber_ring.parse('T1*T3^2')])
        decomposition = module_support_decomposition(p)
        group = fiber_ring.group
        for a in range(0, 26):
            for b in range(0, 4):
                d = group.degree(a, b)
                assert decomposition.contains(d) == (p.hilbert(d) > 0)

    def test_support_membership(self, fiber_ring):
        """Test membership of degrees in the golden quotient support"""
        decomposition = module_support_decomposition(Presentation.cyclic(fiber_ring, [fiber_ring.parse('T2^2')]))
        group = fiber_ring.group
        assert support_membership(decomposition, group.degree(10, 2))
        assert support_membership(decomposition, group.degree(7, 2))
        assert not support_membership(decomposition, group.degree(5, 2))
        assert not support_membership(decomposition, group.degree(3, 1))

    def test_absorbed_components(self, ring_xy):
        """Test components inside another one are dropped"""
        p = Presentation.cyclic(ring_xy, [ring_xy.parse('x^2')])
        decomposition = module_support_decomposition(p)
        assert decomposition.to_dict() == [{'shift': [0], 'generators': [[1]]}]
