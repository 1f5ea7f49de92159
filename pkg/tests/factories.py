"""
Test factories for creating test data
"""
import factory

from basym.grading import DegreeGroup
from basym.polyalg import Ring, monomials_of_degree
from basym.session import Session


class RingFactory(factory.Factory):
    """Factory for standard graded polynomial rings"""
    class Meta:
        model = Ring

    names = ('x', 'y')
    degrees = factory.LazyAttribute(lambda obj: [1] * len(obj.names))


class SessionFactory(factory.Factory):
    """Factory for sessions; ideals are given as {name: [generator text, ...]}"""
    class Meta:
        model = Session

    ring = factory.SubFactory(RingFactory)
    t_range = (1, 3)
    wcap = 20

    @factory.post_generation
    def ideals(obj, create, extracted, **kwargs):
        for name, generators in (extracted or {'I': ['x^2', 'x*y', 'y^2']}).items():
            obj.register_ideal(name, [obj.ring.parse(text) for text in generators])


def random_homogeneous_ideal(rng, nvars=None, max_degree=4, max_generators=3):
    """Random homogeneous ideal in at most three variables; returns (ring, generators)"""
    nvars = nvars or rng.randint(1, 3)
    ring = Ring(['x', 'y', 'z'][:nvars], [1] * nvars)
    group = ring.group
    generators = []
    for _ in range(rng.randint(1, max_generators)):
        d = rng.randint(1, max_degree)
        monomials = monomials_of_degree(ring, group.degree(d))
        chosen = rng.sample(monomials, rng.randint(1, min(3, len(monomials))))
        f = ring.zero()
        for e in chosen:
            f = f + ring.monomial(e, rng.randint(1, ring.characteristic - 1))
        generators.append(f)
    return ring, generators


def random_bigraded_ideal(rng, max_degree=3):
    """Random bihomogeneous ideal in k[x, y] graded by Z^2"""
    group = DegreeGroup(2)
    ring = Ring(['x', 'y'], [group.degree(1, 0), group.degree(0, 1)], group)
    generators = []
    for _ in range(rng.randint(1, 3)):
        a, b = rng.randint(0, max_degree), rng.randint(0, max_degree)
        if a + b == 0:
            a = 1
        generators.append(ring.monomial((a, b), rng.randint(1, 100)))
    return ring, generators
