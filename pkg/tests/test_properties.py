import random
import unittest

from fractions import Fraction

from crystbox.exact_linalg import (
    identity, int_matrix, determinant, int_determinant, is_integral, smith_normal_form,
    invariant_factors, lattice_basis
)
from crystbox.cyclotomic import conjugate
from crystbox.finite_matrix_group import generate_closure, multiplicity
from crystbox.cryst_group import (
    CrystGroup, validate, translate_conjugate, change_lattice_basis, torsion_status,
    minimal_denominator, from_canonical_json
)
from crystbox.cohomology import GModule, extension_class, splitting_equivalence, scaled_basis
from crystbox.catalog import catalog_entries
from crystbox.repr_hodge import isotypical_decomposition, evenness, component_dimensions

_SEED = 20240611

_ROTATIONS = {3: [[0, -1], [1, -1]], 4: [[0, -1], [1, 0]], 6: [[1, -1], [1, 0]]}


def _block(upper):
    return [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0] + upper[0], [0, 0] + upper[1]]


def _screw(m):
    """ rank 3: translation by 1/m along the axis of an order m rotation """
    R = _ROTATIONS[m]
    L = [[1, 0, 0], [0] + R[0], [0] + R[1]]
    return CrystGroup.from_generators(3, [(L, [Fraction(1, m), 0, 0])])


_GROUPS = [
    lambda: CrystGroup.from_generators(4, [(_block([[-1, 0], [0, -1]]),
                                            [Fraction(1, 2), 0, 0, 0])]),
    lambda: CrystGroup.from_generators(4, [(_block([[0, -1], [1, -1]]),
                                            [Fraction(1, 3), 0, 0, 0])]),
    lambda: CrystGroup.from_generators(2, [([[-1, 0], [0, -1]], [Fraction(1, 2), 0])]),
]

_SMALL_GROUPS = [
    lambda: CrystGroup.from_generators(2, [([[1, 0], [0, -1]], [Fraction(1, 2), 0])]),
    lambda: CrystGroup.from_generators(2, [([[-1, 0], [0, 1]], [0, Fraction(1, 2)]),
                                           ([[1, 0], [0, -1]], [Fraction(1, 2), 0])]),
    lambda: CrystGroup.from_generators(2, [([[-1, 0], [0, -1]], [Fraction(1, 2), 0])]),
    lambda: CrystGroup.from_generators(2, [(_ROTATIONS[3], [0, 0])]),
    lambda: CrystGroup.from_generators(2, [(_ROTATIONS[4], [0, 0])]),
    lambda: CrystGroup.from_generators(2, [(_ROTATIONS[6], [0, 0])]),
    lambda: CrystGroup.from_generators(3, [([[1, 0, 0], [0, -1, 0], [0, 0, -1]],
                                            [Fraction(1, 2), 0, 0])]),
    lambda: _screw(3),
    lambda: _screw(4),
    lambda: _screw(6),
]


def _random_shift(rng, n):
    return [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3, 4, 6])) for _ in range(n)]


def _random_unimodular(rng, n):
    U = identity(n)
    for _ in range(3):
        i, j = rng.sample(range(n), 2)
        E = identity(n)
        E[i, j] = rng.choice([-1, 1])
        U = U.dot(E)
    return int_matrix(U.tolist())


def _random_overlattice(rng, C, max_index=16):
    """
    A G-invariant lattice containing Z^n with index at most max_index, as
    (basis, d) where d is set when the lattice is (1/d) Z^n.
    """
    d = rng.choice([1, 2, 3, 4])
    if rng.random() < 0.3 and d ** C.n <= max_index:
        return scaled_basis(C.n, d), d
    for _ in range(20):
        v = [rng.randint(-3, 3) for _ in range(C.n)]
        vectors = [[int(i == j) for j in range(C.n)] for i in range(C.n)]
        vectors += [[Fraction(int(x), d) for x in C.linear(g).dot(v)] for g in range(C.order)]
        basis = lattice_basis(vectors, C.n)
        if 1 / abs(determinant(basis)) <= max_index:
            return basis, None
    return scaled_basis(C.n, 1), 1


def _random_signed_permutation(rng, n):
    perm = rng.sample(range(n), n)
    return [[rng.choice([-1, 1]) if perm[i] == j else 0 for j in range(n)] for i in range(n)]


def _invariants(C):
    data = isotypical_decomposition(C)
    return (torsion_status(C).is_torsion_free, minimal_denominator(C).d,
            extension_class(C).order, evenness(data).even,
            sorted(r.dimension for r in component_dimensions(data)))


class TestInvariance(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(_SEED)

    def test_translation_conjugation(self):
        for build in _GROUPS:
            C = build()
            expected = _invariants(C)
            for _ in range(3):
                D = translate_conjugate(C, _random_shift(self.rng, C.n))
                self.assertTrue(validate(D).valid)
                self.assertEqual(_invariants(D), expected)

    def test_lattice_basis_change(self):
        for build in _GROUPS:
            C = build()
            expected = _invariants(C)
            for _ in range(3):
                D = change_lattice_basis(C, _random_unimodular(self.rng, C.n))
                self.assertTrue(validate(D).valid)
                self.assertEqual(_invariants(D), expected)

    def test_denominator_matches_class_order(self):
        for build in _GROUPS:
            C = translate_conjugate(build(), _random_shift(self.rng, build().n))
            self.assertEqual(minimal_denominator(C).d, extension_class(C).order)

    def test_catalog_conjugates(self):
        entries = catalog_entries()
        for _ in range(100):
            entry = self.rng.choice(entries)
            C = from_canonical_json(entry.group)
            D = translate_conjugate(C, _random_shift(self.rng, C.n))
            self.assertTrue(validate(D).valid, entry.name)
            e = entry.expected
            self.assertEqual(_invariants(D),
                             (e["torsion_free"], e["d"], e["epsilon_order"], e["even"],
                              sorted(e["component_dimensions"])), entry.name)


class TestSplitting(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(_SEED + 1)

    def test_random_overlattices(self):
        for _ in range(100):
            base = self.rng.choice(_SMALL_GROUPS)()
            C = translate_conjugate(base, _random_shift(self.rng, base.n))
            basis, d = _random_overlattice(self.rng, C)
            result = splitting_equivalence(C, basis)
            self.assertEqual(result.realizable, result.class_vanishes)
            self.assertEqual(result.realizable, result.has_fixed_point)
            if d is not None:
                self.assertEqual(result.realizable, d % extension_class(C).order == 0)
            if result.has_fixed_point:
                module = GModule.overlattice(C.group, basis)
                p = result.fixed_point
                for g in range(C.order):
                    self.assertTrue(is_integral(module.coordinates(
                        C.linear(g).dot(p) + C.translation(g) - p)))


class TestCharacterTables(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(_SEED + 2)

    def test_random_subgroups(self):
        for _ in range(12):
            n = self.rng.choice([2, 3])
            gens = [_random_signed_permutation(self.rng, n)
                    for _ in range(self.rng.choice([1, 2]))]
            G = generate_closure(n, gens)
            table = G.character_table()
            # row orthogonality summed over elements
            for i in range(len(table)):
                for j in range(len(table)):
                    total = sum((table.value(i, g) * conjugate(table.value(j, g))
                                 for g in range(G.order)), 0)
                    self.assertEqual(total, G.order if i == j else 0)
            # column orthogonality
            for a, cls_a in enumerate(table.classes):
                for b in range(len(table.classes)):
                    total = sum((chi[a] * conjugate(chi[b]) for chi in table.chars), 0)
                    self.assertEqual(total, G.order // len(cls_a.members) if a == b else 0)
            self.assertEqual(sum(table.degree(i) ** 2 for i in range(len(table))), G.order)
            traces = [sum(G.matrix(cl.representative)[k][k] for k in range(n))
                      for cl in table.classes]
            self.assertEqual(sum(multiplicity(table, traces, i) * table.degree(i)
                                 for i in range(len(table))), n)


class TestSmithForm(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(_SEED + 3)

    def _random_matrix(self):
        m, c = self.rng.randint(1, 5), self.rng.randint(1, 5)
        if self.rng.random() < 0.4:
            k = self.rng.randint(1, min(m, c))
            X = int_matrix([[self.rng.randint(-4, 4) for _ in range(k)] for _ in range(m)])
            Y = int_matrix([[self.rng.randint(-4, 4) for _ in range(c)] for _ in range(k)])
            return X.dot(Y)
        return int_matrix([[self.rng.randint(-9, 9) for _ in range(c)] for _ in range(m)])

    def test_random_matrices(self):
        for _ in range(60):
            A = self._random_matrix()
            U, D, V = smith_normal_form(A)
            self.assertEqual(U.dot(A).dot(V).tolist(), D.tolist())
            self.assertIn(int_determinant(U), (1, -1))
            self.assertIn(int_determinant(V), (1, -1))
            diagonal = [int(D[i, i]) for i in range(min(D.shape))]
            for i in range(D.shape[0]):
                for j in range(D.shape[1]):
                    if i != j:
                        self.assertEqual(D[i, j], 0)
            nonzero = [x for x in diagonal if x]
            self.assertEqual(diagonal, nonzero + [0] * (len(diagonal) - len(nonzero)))
            self.assertTrue(all(x > 0 for x in nonzero))
            self.assertTrue(all(b % a == 0 for a, b in zip(nonzero, nonzero[1:])))
            self.assertEqual(invariant_factors(A), nonzero)


if __name__ == '__main__':
    unittest.main()
