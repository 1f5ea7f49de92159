"""
End-to-end checks on the power sums x^a + y^a + z^a for a = 2, 5, 8
"""
import pytest

from basym.asymptote import asymptotic_tor_shape, fiber_complex, strand_hilbert_polynomial
from basym.homalg import Presentation, free_resolution, has_finite_length, minimalize, strand, tor_table
from basym.rees import power_presentation, rees_module_presentation
from basym.session import parse_session
from basym.verify import oracle_betti, stanley_report, verify_shape
from tests.conftest import GOLDEN_SESSION


def _support(table, i):
    return [d.to_list()[0] for d in table.support(i)]


def _orbit(t):
    """2t + 6{0..t}: degrees of products of t generators of degree 2 or 8"""
    return {2 * t + 6 * j for j in range(t + 1)} if t >= 0 else set()


def _shift(offset, degrees):
    return {offset + d for d in degrees}


def expected_support(ell, t):
    """supp Tor_ell(I^t) for the power sums of degrees 2, 5, 8"""
    if ell == 0:
        return _orbit(t) | _shift(5, _orbit(t - 1))
    if ell == 1:
        return _shift(5, _orbit(t)) | _shift(10, _orbit(t - 1))
    return _shift(15, _orbit(t - 1)) | _shift(20, _orbit(t - 2))


def _fiber_dimension(weight, total):
    """dim k[T1, T2, T3] in degree (weight, total), deg T = 2, 5, 8"""
    return sum(
        1
        for a in range(total + 1)
        for b in range(total + 1 - a)
        if 2 * a + 5 * b + 8 * (total - a - b) == weight
    )


@pytest.fixture(scope='module')
def golden_shapes():
    """Shapes of Tor_0, Tor_1 and Tor_2 sharing one fiber complex"""
    session = parse_session(GOLDEN_SESSION)
    fiber = fiber_complex(session.rees_setup(), None, 3)
    return {
        ell: asymptotic_tor_shape(session.ring, session.ideals, ell=ell, fiber=fiber)
        for ell in range(3)
    }


@pytest.fixture
def rees_resolution(golden_session):
    """Minimal resolution of the Rees algebra over S[T1, T2, T3]"""
    setup = golden_session.rees_setup()
    return free_resolution(rees_module_presentation(None, setup))


pytestmark = pytest.mark.slow


class TestCompleteIntersection:
    """Test the ideal and its powers"""

    def test_finite_length(self, golden_session):
        """Test S/I is finite dimensional"""
        assert has_finite_length(Presentation.cyclic(golden_session.ring, golden_session.ideals[0]))

    def test_first_power(self, golden_session):
        """Test the Koszul shape of the Betti table of I"""
        table = oracle_betti(golden_session, (1,), 2)
        assert _support(table, 0) == [2, 5, 8]
        assert _support(table, 1) == [7, 10, 13]
        assert _support(table, 2) == [15]

    def test_second_power(self, golden_session):
        """Test generators of I^2"""
        table = oracle_betti(golden_session, (2,), 1)
        assert _support(table, 0) == [4, 7, 10, 13, 16]


class TestStrands:
    """Test strands of the Rees algebra resolution"""

    def test_first_strand_terms(self, golden_session, rees_resolution):
        """Test the t = 1 strand starts with S(-2) + S(-5) + S(-8)"""
        c = strand(rees_resolution, (1,), golden_session.ring)
        assert sorted(d.to_list()[0] for d in c.module(0).shifts) == [2, 5, 8]
        assert c.is_complex()

    def test_zero_strand(self, golden_session, rees_resolution):
        """Test the t = 0 strand is S alone"""
        c = strand(rees_resolution, (0,), golden_session.ring)
        assert [d.to_list() for d in c.module(0).shifts] == [[0]]
        assert all(c.module(i).rank == 0 for i in range(1, len(c.modules)))

    def test_second_strand_syzygies(self, golden_session, rees_resolution):
        """Test each syzygy of the Rees ideal is multiplied by T1, T2, T3"""
        c = strand(rees_resolution, (2,), golden_session.ring)
        assert sorted(d.to_list()[0] for d in c.module(1).shifts) == [9, 12, 12, 15, 15, 15, 18, 18, 21]

    def test_strand_shifts_contain_support(self, golden_session, rees_resolution):
        """Test supp Tor_i(I^t) lies among the shifts of the unminimalized strand"""
        for t in (1, 2):
            c = strand(rees_resolution, (t,), golden_session.ring)
            table = oracle_betti(golden_session, (t,), 2)
            for i in range(3):
                assert set(table.support(i)) <= set(c.shifts(i)), (t, i)

    def test_strand_resolves_power(self, golden_session, rees_resolution):
        """Test the minimalized strand has the Betti table of I^t"""
        setup = golden_session.rees_setup()
        for t in (1, 2):
            c = minimalize(strand(rees_resolution, (t,), golden_session.ring))
            assert c.betti_table() == tor_table(power_presentation(setup, (t,)))


class TestFiberRing:
    """Test the toric ideal and support decomposition of k[T1, T2, T3]"""

    def test_toric_ideal(self, golden_session):
        """Test the single binomial relation"""
        report = stanley_report(golden_session)
        assert report['toric']['binomials'] == ['T2^2 - T1*T3']

    def test_support(self, golden_session):
        """Test the two components of the fiber ring support"""
        report = stanley_report(golden_session)
        assert report['toric']['support'] == [
            {'shift': [0, 0], 'generators': [[2, 1], [8, 1]]},
            {'shift': [5, 1], 'generators': [[2, 1], [8, 1]]},
        ]


class TestShapes:
    """Test predicted shapes against the oracle"""

    def test_generator_shape(self, golden_session):
        """Test supp Tor_0(I^t) = 2t + {0, 6, ..} union 5 + 2(t-1) + {0, 6, ..}"""
        shape = asymptotic_tor_shape(golden_session.ring, golden_session.ideals, ell=0)
        assert [c.to_dict() for c in shape.components] == [
            {'delta': [0], 't0': [0], 'blocks': [[[2], [8]]]},
            {'delta': [5], 't0': [1], 'blocks': [[[2], [8]]]},
        ]
        assert sorted(d.to_list()[0] for d in shape.support_at((2,))) == [4, 7, 10, 13, 16]

    def test_verify(self, golden_session):
        """Test Tor_0 to Tor_3 agree with the oracle for t = 1..4"""
        report = verify_shape(golden_session, [0, 1, 2, 3])
        assert report.ok, [e.to_dict() for e in report.mismatches()]
        assert {e.ell for e in report.entries} == {0, 1, 2, 3}
        assert {e.t for e in report.entries if e.ell == 0} == {(1,), (2,), (3,), (4,)}
        assert all(not e.oracle for e in report.entries if e.ell == 3)


class TestSupportFormulas:
    """Test supports of Tor_0, Tor_1 and Tor_2 of I^t against closed formulas"""

    @pytest.mark.parametrize('t', [1, 2, 3, 4])
    def test_oracle(self, golden_session, t):
        """Test the directly computed Betti tables"""
        table = oracle_betti(golden_session, (t,), 2)
        for ell in range(3):
            assert _support(table, ell) == sorted(expected_support(ell, t)), ell

    @pytest.mark.parametrize('t', [1, 2, 3, 4])
    def test_prediction(self, golden_shapes, t):
        """Test the predicted shapes"""
        for ell, shape in golden_shapes.items():
            predicted = sorted(d.to_list()[0] for d in shape.support_at((t,)))
            assert predicted == sorted(expected_support(ell, t)), ell

    @pytest.mark.parametrize('t', [1, 2, 3, 4])
    def test_last_syzygies(self, golden_session, t):
        """Test dim Tor_2(I^t)_mu = dim k[T]_(mu - 15, t - 1)"""
        table = oracle_betti(golden_session, (t,), 2)
        group = golden_session.ring.group
        for mu in expected_support(2, t):
            assert table[(2, group.degree(mu))] == _fiber_dimension(mu - 15, t - 1), mu
        assert table[(2, group.degree(13 + 2 * t))] == 1

    def test_lowest_strand_polynomial(self, golden_session, golden_shapes):
        """Test dim Tor_2(I^t)_(13 + 2t) fits the constant 1"""
        group = golden_session.ring.group
        poly = strand_hilbert_polynomial(
            golden_shapes[2].homology, group.degree(13), s=1, direction=(group.degree(2),)
        )
        assert str(poly) == '1'
        assert poly((6,)) == 1
