"""
Tests for degree groups and lattices
"""
import pytest
from fractions import Fraction

from basym.exceptions import BasymError, DegreeGroupMismatch
from basym.grading import (
    DegreeGroup,
    PositivityFunctional,
    augmented_blocks,
    check_positivity,
    delta_tuple,
    evaluate_relation,
    is_free_independent,
    relation_lattice,
)


class TestDegreeGroup:
    """Test DegreeGroup and Degree arithmetic"""

    def test_torsion_is_reduced(self):
        """Test torsion coordinates are kept modulo their order"""
        group = DegreeGroup(1, (3,))
        assert group.degree(2, 7).coordinates() == (2, 1)

    def test_arithmetic(self):
        """Test addition, negation and scalar multiples"""
        group = DegreeGroup(2)
        a, b = group.degree(1, 2), group.degree(3, -1)
        assert (a + b).to_list() == [4, 1]
        assert (a - b).to_list() == [-2, 3]
        assert (3 * a).to_list() == [3, 6]
        assert (a - a).is_zero()

    def test_mixed_groups_raise(self):
        """Test adding degrees from different groups"""
        with pytest.raises(DegreeGroupMismatch):
            DegreeGroup(1).degree(1) + DegreeGroup(2).degree(1, 1)

    def test_wrong_length(self):
        """Test building a degree with the wrong number of coordinates"""
        with pytest.raises(BasymError):
            DegreeGroup(2).degree(1)

    def test_bad_torsion_modulus(self):
        """Test torsion moduli below 2"""
        with pytest.raises(BasymError):
            DegreeGroup(1, (1,))

    def test_split_and_embed(self):
        """Test (delta, t) embedding into G x Z^s and back"""
        group = DegreeGroup(1, (2,))
        delta = group.degree(5, 1)
        theta = group.embed(delta, (1, 2))
        assert theta.group == DegreeGroup(3, (2,))
        assert theta.coordinates() == (5, 1, 2, 1)
        assert theta.split(2) == (delta, (1, 2))

    def test_str(self):
        """Test printed forms"""
        assert str(DegreeGroup(1).degree(5)) == "5"
        assert str(DegreeGroup(2).degree(1, 2)) == "(1,2)"
        assert str(DegreeGroup(1, (3,)).degree(1, 2)) == "(1|2)"
        assert str(DegreeGroup(2, (3,))) == "Z^2 + Z/3"


class TestPositivity:
    """Test positivity functionals"""

    def test_default_weights(self):
        """Test the default functional sums the free coordinates"""
        group = DegreeGroup(2)
        phi = PositivityFunctional.default(group)
        assert phi(group.degree(2, 3)) == 5

    def test_extend(self):
        """Test extending by unit weights"""
        phi = PositivityFunctional((Fraction(1, 2),)).extend(2)
        assert phi.weights == (Fraction(1, 2), Fraction(1), Fraction(1))

    def test_check_positivity(self):
        """Test strict positivity on a list of degrees"""
        group = DegreeGroup(2)
        phi = PositivityFunctional((1, -1))
        assert check_positivity(phi, [group.degree(2, 1)])
        assert not check_positivity(phi, [group.degree(1, 1)])


class TestRelationLattice:
    """Test integer relations among degrees"""

    def test_independent_degrees(self):
        """Test independent degrees have no relations"""
        group = DegreeGroup(2)
        assert relation_lattice([group.degree(1, 0), group.degree(1, 1)]) == []

    def test_augmented_golden_degrees(self):
        """Test the one relation among (2,1), (5,1), (8,1)"""
        group = DegreeGroup(2)
        degrees = [group.degree(2, 1), group.degree(5, 1), group.degree(8, 1)]
        lattice = relation_lattice(degrees)
        assert len(lattice) == 1
        assert tuple(abs(a) for a in lattice[0]) == (1, 2, 1)
        assert evaluate_relation(lattice[0], degrees).is_zero()

    def test_rank_in_z(self):
        """Test three integers have a rank two relation lattice"""
        group = DegreeGroup(1)
        degrees = [group.degree(2), group.degree(5), group.degree(8)]
        lattice = relation_lattice(degrees)
        assert len(lattice) == 2
        for relation in lattice:
            assert evaluate_relation(relation, degrees).is_zero()

    def test_torsion_relation(self):
        """Test a torsion degree is killed by its order"""
        group = DegreeGroup(0, (3,))
        lattice = relation_lattice([group.degree(1)])
        assert [tuple(abs(a) for a in v) for v in lattice] == [(3,)]

    def test_free_independence(self):
        """Test free independence"""
        group = DegreeGroup(1)
        assert is_free_independent([])
        assert is_free_independent([group.degree(2)])
        assert not is_free_independent([group.degree(2), group.degree(3)])


class TestBlocks:
    """Test block helpers"""

    def test_delta_tuple(self):
        """Test consecutive differences"""
        group = DegreeGroup(1)
        E = [group.degree(2), group.degree(5), group.degree(8)]
        assert [d.to_list() for d in delta_tuple(E)] == [[3], [3]]

    def test_augmented_blocks(self):
        """Test E_1 x {e_1} | E_2 x {e_2}"""
        group = DegreeGroup(1)
        blocks = [[group.degree(2)], [group.degree(3), group.degree(4)]]
        out = augmented_blocks(blocks, group)
        assert [d.to_list() for d in out] == [[2, 1, 0], [3, 0, 1], [4, 0, 1]]
        assert is_free_independent(out)
