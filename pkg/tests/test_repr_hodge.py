import unittest

from fractions import Fraction

import numpy as np

from crystbox.cyclotomic import cyclotomic_matrix
from crystbox.cryst_group import CrystGroup
from crystbox.repr_hodge import (
    lattice_character, isotypical_decomposition, evenness, HodgeType,
    enumerate_hodge_types, component_dimensions, sample_complex_structure,
    character_label, NotEven
)

_HALF = Fraction(1, 2)


def _block(upper):
    return [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0] + upper[0], [0, 0] + upper[1]]


def _surface(m, automorphism):
    return CrystGroup.from_generators(4, [(_block(automorphism), [Fraction(1, m), 0, 0, 0])])


def _s3_on_two_copies():
    swap = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    rotation = [[0, -1, 0, 0], [1, -1, 0, 0], [0, 0, 0, -1], [0, 0, 1, -1]]
    return CrystGroup.from_generators(4, [(swap, [0] * 4), (rotation, [0] * 4)])


def _multiplicities(data):
    return [c.multiplicity for c in data.characters]


class TestIsotypicalDecomposition(unittest.TestCase):
    def test_lattice_character(self):
        self.assertEqual(lattice_character(_surface(2, [[-1, 0], [0, -1]])), [4, 0])

    def test_z2_surface(self):
        data = isotypical_decomposition(_surface(2, [[-1, 0], [0, -1]]))
        self.assertEqual(_multiplicities(data), [2, 2])
        self.assertTrue(all(c.real for c in data.characters))
        self.assertEqual(data.pairs(), [])

    def test_z3_surface(self):
        data = isotypical_decomposition(_surface(3, [[0, -1], [1, -1]]))
        self.assertEqual(sorted(_multiplicities(data)), [1, 1, 2])
        self.assertEqual(len(data.pairs()), 1)
        self.assertEqual([c.multiplicity for c in data.real_characters()], [2])

    def test_nonabelian(self):
        data = isotypical_decomposition(_s3_on_two_copies())
        self.assertEqual([(c.degree, c.multiplicity) for c in data.characters],
                         [(1, 0), (1, 0), (2, 2)])

    def test_labels(self):
        self.assertEqual(character_label(0), "X.1")


class TestEvenness(unittest.TestCase):
    def test_even(self):
        report = evenness(isotypical_decomposition(_surface(2, [[-1, 0], [0, -1]])))
        self.assertTrue(report.even)
        self.assertTrue(report.rank_even)

    def test_odd_rank(self):
        C = CrystGroup.from_generators(3, [([[1, 0, 0], [0, -1, 0], [0, 0, -1]],
                                            [_HALF, 0, 0])])
        report = evenness(isotypical_decomposition(C))
        self.assertFalse(report.even)
        self.assertFalse(report.rank_even)

    def test_odd_real_multiplicity(self):
        C = CrystGroup.from_generators(4, [([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0],
                                             [0, 0, 0, -1]], [_HALF, 0, 0, 0])])
        data = isotypical_decomposition(C)
        report = evenness(data)
        self.assertTrue(report.rank_even)
        self.assertFalse(report.even)
        self.assertEqual([r[3] for r in report.breakdown], [False, False])
        self.assertEqual(enumerate_hodge_types(data), [])
        with self.assertRaises(NotEven):
            sample_complex_structure(C, HodgeType({0: 0, 1: 1}), data)


class TestHodgeTypes(unittest.TestCase):
    def test_real_characters_only(self):
        data = isotypical_decomposition(_surface(2, [[-1, 0], [0, -1]]))
        types = enumerate_hodge_types(data)
        self.assertEqual(types, [HodgeType({0: 1, 1: 1})])
        self.assertEqual([r.dimension for r in component_dimensions(data)], [2])

    def test_pairs(self):
        data = isotypical_decomposition(_surface(3, [[0, -1], [1, -1]]))
        types = enumerate_hodge_types(data)
        self.assertEqual(len(types), 2)
        self.assertEqual(types[0].conjugate(data), types[1])
        self.assertEqual([r.dimension for r in component_dimensions(data)], [1, 1])

    def test_trivial_group_dimensions(self):
        for n, dim in ((2, 1), (4, 4), (6, 9)):
            data = isotypical_decomposition(CrystGroup.from_generators(n, []))
            self.assertEqual([r.dimension for r in component_dimensions(data)], [dim])

    def test_nonabelian_dimension(self):
        data = isotypical_decomposition(_s3_on_two_copies())
        reports = component_dimensions(data)
        self.assertEqual(len(reports), 1)
        self.assertEqual(reports[0].dimension, 1)

    def test_check(self):
        data = isotypical_decomposition(_surface(2, [[-1, 0], [0, -1]]))
        HodgeType({0: 1, 1: 1}).check(data)
        with self.assertRaises(ValueError):
            HodgeType({0: 2, 1: 1}).check(data)

    def test_to_dict(self):
        self.assertEqual(HodgeType({1: 0, 0: 2}).to_dict(), {"X.1": 2, "X.2": 0})


class TestComplexStructure(unittest.TestCase):
    def _assert_structure(self, C, sample):
        n = C.n
        J = sample.J
        minus = cyclotomic_matrix(-np.identity(n, dtype=int).astype(object), 1)
        self.assertTrue(all(a == b for a, b in zip(J.dot(J).flat, minus.flat)))
        for g in range(C.order):
            L = C.linear(g)
            self.assertTrue(all(a == b for a, b in zip(L.dot(J).flat, J.dot(L).flat)))
        self.assertEqual(sample.recovered_type, sample.hodge_type)
        self.assertIn(sample.orientation_sign, (1, -1))
        self.assertTrue(np.allclose(sample.J_float.dot(sample.J_float), -np.identity(n)))

    def test_trivial_rank_two(self):
        C = CrystGroup.from_generators(2, [])
        data = isotypical_decomposition(C)
        sample = sample_complex_structure(C, enumerate_hodge_types(data)[0], data)
        self._assert_structure(C, sample)
        self.assertEqual([[int(x.to_rational()) for x in row] for row in sample.J],
                         [[0, 1], [-1, 0]])
        self.assertEqual(sample.orientation_sign, 1)

    def test_every_type(self):
        for C in (_surface(2, [[-1, 0], [0, -1]]), _surface(3, [[0, -1], [1, -1]]),
                  _surface(4, [[0, -1], [1, 0]])):
            data = isotypical_decomposition(C)
            for t in enumerate_hodge_types(data):
                sample = sample_complex_structure(C, t, data)
                self._assert_structure(C, sample)
                self.assertEqual(sample.conjugate_type, t.conjugate(data))

    def test_nonabelian_structure(self):
        C = _s3_on_two_copies()
        data = isotypical_decomposition(C)
        self._assert_structure(C, sample_complex_structure(C, enumerate_hodge_types(data)[0],
                                                           data))


if __name__ == '__main__':
    unittest.main()
