import unittest

from fractions import Fraction

import numpy as np

from crystbox.exact_linalg import is_integral, int_matrix, identity
from crystbox.finite_matrix_group import generate_closure
from crystbox.cryst_group import (
    CrystGroup, validate, translate_conjugate, change_lattice_basis,
    vector_system_of_word, eigenvalue_one_filter, torsion_status, minimal_denominator,
    reduce_translations, to_canonical_json, from_canonical_json, InvalidGeneratorIndex
)

_HALF = Fraction(1, 2)


def _surface_z2():
    """ translation by 1/2 on one curve, -1 on the other """
    L = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
    return CrystGroup.from_generators(4, [(L, [_HALF, 0, 0, 0])])


def _minus_identity(t=(0, 0)):
    return CrystGroup.from_generators(2, [([[-1, 0], [0, -1]], list(t))])


class TestCrystGroup(unittest.TestCase):
    def test_vector_system(self):
        C = _surface_z2()
        self.assertEqual(C.order, 2)
        self.assertEqual(list(C.translation(0)), [0, 0, 0, 0])
        self.assertEqual(list(C.translation(1)), [_HALF, 0, 0, 0])
        self.assertEqual(list(C.cocycle(1, 1)), [1, 0, 0, 0])

    def test_vector_system_reduced_mod_one(self):
        C = _minus_identity((Fraction(3, 2), Fraction(-1, 3)))
        self.assertEqual(list(C.translation(1)), [_HALF, Fraction(2, 3)])

    def test_equality(self):
        self.assertEqual(_surface_z2(), _surface_z2())
        self.assertNotEqual(_minus_identity(), _minus_identity((_HALF, 0)))

    def test_rank_zero_rejected(self):
        with self.assertRaises(ValueError):
            CrystGroup.from_generators(0, [])


class TestValidation(unittest.TestCase):
    def test_valid(self):
        report = validate(_surface_z2())
        self.assertTrue(report.valid)
        self.assertEqual(report.violations, [])

    def test_pure_translation_generator(self):
        C = CrystGroup.from_generators(2, [([[1, 0], [0, 1]], [_HALF, 0])])
        report = validate(C)
        self.assertFalse(report.valid)
        self.assertIn("faithfulness", [v.kind for v in report.violations])

    def test_inconsistent_generators(self):
        L = [[1, 0], [0, -1]]
        C = CrystGroup.from_generators(2, [(L, [_HALF, 0]), (L, [0, 0])])
        report = validate(C)
        self.assertFalse(report.valid)
        self.assertIn("generator", [v.kind for v in report.violations])

    def test_cocycle_and_identity_violations(self):
        G = generate_closure(2, [[[1, 0], [0, -1]]])
        report = validate(CrystGroup(G, [[0, 0], [Fraction(1, 3), 0]]))
        self.assertIn("cocycle", [v.kind for v in report.violations])
        report = validate(CrystGroup(G, [[_HALF, 0], [0, 0]]))
        self.assertIn("identity", [v.kind for v in report.violations])


class TestTorsion(unittest.TestCase):
    def test_torsion_free(self):
        report = torsion_status(_surface_z2())
        self.assertTrue(report.is_torsion_free)
        self.assertEqual(report.witnesses, [])

    def test_linear_torsion(self):
        report = torsion_status(_minus_identity())
        self.assertFalse(report.is_torsion_free)
        w = report.witnesses[0]
        self.assertEqual(w.element, 1)
        self.assertEqual(w.order, 2)
        self.assertEqual(list(w.fixed_point), [0, 0])

    def test_affine_torsion(self):
        C = _minus_identity((_HALF, 0))
        report = torsion_status(C)
        self.assertFalse(report.is_torsion_free)
        for w in report.witnesses:
            L = C.linear(w.element)
            self.assertTrue(is_integral(L.dot(w.fixed_point) + C.translation(w.element)
                                        - w.fixed_point))
            self.assertTrue(is_integral(w.lattice_shift))

    def test_eigenvalue_one_filter(self):
        self.assertEqual(eigenvalue_one_filter(_surface_z2()), {1: True})
        self.assertEqual(eigenvalue_one_filter(_minus_identity()), {1: False})


class TestMinimalDenominator(unittest.TestCase):
    def test_surface(self):
        result = minimal_denominator(_surface_z2())
        self.assertEqual(result.d, 2)
        for u in result.group.vector_system:
            self.assertTrue(is_integral([2 * x for x in u]))

    def test_removable_translation(self):
        result = minimal_denominator(_minus_identity((_HALF, 0)))
        self.assertEqual(result.d, 1)
        self.assertEqual(list(result.group.translation(1)), [0, 0])

    def test_partially_removable(self):
        C = CrystGroup.from_generators(2, [([[1, 0], [0, -1]], [_HALF, Fraction(1, 3)])])
        self.assertEqual(minimal_denominator(C).d, 2)

    def test_trivial_group(self):
        C = CrystGroup.from_generators(3, [])
        self.assertEqual(minimal_denominator(C).d, 1)


class TestConjugation(unittest.TestCase):
    def test_translate_conjugate(self):
        C = translate_conjugate(_minus_identity(), [Fraction(1, 4), 0])
        self.assertEqual(list(C.translation(1)), [_HALF, 0])
        self.assertTrue(validate(C).valid)

    def test_change_lattice_basis(self):
        C = CrystGroup.from_generators(2, [([[1, 0], [0, -1]], [_HALF, 0])])
        D = change_lattice_basis(C, [[1, 1], [0, 1]])
        self.assertTrue(validate(D).valid)
        self.assertEqual([list(r) for r in D.generators[0][0]], [[1, -2], [0, -1]])
        self.assertTrue(torsion_status(D).is_torsion_free)
        self.assertEqual(minimal_denominator(D).d, 2)
        with self.assertRaises(ValueError):
            change_lattice_basis(C, [[2, 0], [0, 1]])
        E = change_lattice_basis(D, [[1, -1], [0, 1]])
        self.assertEqual(E, C)

    def test_vector_system_of_word(self):
        C = _surface_z2()
        g, u = vector_system_of_word(C, [0])
        self.assertEqual((g, list(u)), (1, [_HALF, 0, 0, 0]))
        g, u = vector_system_of_word(C, [0, 0])
        self.assertEqual((g, list(u)), (0, [0, 0, 0, 0]))
        with self.assertRaises(InvalidGeneratorIndex):
            vector_system_of_word(C, [3])
        g, u = vector_system_of_word(C, [np.int64(0), np.int32(0)])
        self.assertEqual((g, list(u)), (0, [0, 0, 0, 0]))
        with self.assertRaises(InvalidGeneratorIndex):
            vector_system_of_word(C, [0.0])
        with self.assertRaises(InvalidGeneratorIndex):
            vector_system_of_word(C, [np.int64(-1)])


class TestTranslationReduction(unittest.TestCase):
    def test_reduce(self):
        action = [(identity(2), [_HALF, 0]), (int_matrix([[-1, 0], [0, -1]]), [0, 0])]
        reduction = reduce_translations(2, action)
        self.assertEqual(reduction.translation_quotient.invariant_factors, [2])
        self.assertEqual(reduction.group.order, 2)
        self.assertTrue(validate(reduction.group).valid)
        self.assertEqual(abs(reduction.basis[0, 0] * reduction.basis[1, 1]), _HALF)

    def test_no_translations(self):
        reduction = reduce_translations(4, _surface_z2().generators)
        self.assertTrue(reduction.translation_quotient.is_trivial())
        self.assertEqual(reduction.group, _surface_z2())


class TestCanonicalJson(unittest.TestCase):
    def setUp(self):
        self.data = {"rank": 2, "generators": [
            {"linear": [[-1, 0], [0, -1]], "translation": ["1/2", "0"]}]}

    def test_canonical_form(self):
        self.assertEqual(to_canonical_json(from_canonical_json(self.data)), self.data)
        shifted = {"rank": 2, "generators": [
            {"linear": [[-1, 0], [0, -1]], "translation": ["3/2", 0]}]}
        self.assertEqual(to_canonical_json(from_canonical_json(shifted)), self.data)

    def test_malformed(self):
        for bad in ([], {"generators": []}, {"rank": 0, "generators": []},
                    {"rank": True, "generators": []},
                    {"rank": 2, "generators": [{"linear": [[1, 0]], "translation": [0, 0]}]},
                    {"rank": 2, "generators": [{"linear": [[1.5, 0], [0, 1]],
                                                "translation": [0, 0]}]},
                    {"rank": 2, "generators": [{"linear": [[1, 0], [0, 1]],
                                                "translation": ["1/0", 0]}]},
                    {"rank": 2, "generators": [{"linear": [[1, 0], [0, 1]]}]}):
            with self.assertRaises(ValueError):
                from_canonical_json(bad)


if __name__ == '__main__':
    unittest.main()
