#!/usr/bin/env python3
"""
Finite subgroups of GL(n, Z): closure from generators, multiplication table,
conjugacy classes and exact character tables (dual-group enumeration for
abelian groups, class-sum eigenvectors over a prime field for the rest).
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import math
import logging

from collections import deque, namedtuple
from fractions import Fraction
from itertools import product

import numpy as np

from sympy import GF, Poly, Symbol, nextprime, primitive_root, sqrt_mod
from sympy.polys.matrices import DomainMatrix

from crystbox.exact_linalg import (
    int_matrix, identity, matrix_key, int_determinant, fga_from_relations,
    DimensionMismatch
)
from crystbox.cyclotomic import Cyclotomic, zeta, conjugate

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

_DEFAULT_CLOSURE_LIMIT = 10000

ConjugacyClass = namedtuple("ConjugacyClass", ["representative", "members"])


class NotFinite(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class LiftFailed(RuntimeError):
    pass


class NotIntegral(ValueError):
    pass


class FiniteMatrixGroup(object):
    """
    A finite matrix group with its elements in canonical order (identity
    first, then increasing row-major entry sequence), a multiplication
    table on indices, inverses, and a word in the input generators for
    every element.
    """

    def __init__(self, n=None, elements=None, mult=None, inverse=None,
                 generators=None, generator_words=None):
        if n is None or elements is None:
            raise IndexError("invalid n= or elements= argument; build groups "
                             "with generate_closure()")
        self._n = n
        self._elements = list(elements)
        self._mult = mult
        self._inverse = inverse
        self._generators = list(generators or [])
        self._words = generator_words
        self._index = {matrix_key(m): i for i, m in enumerate(self._elements)}
        self._orders = None
        self._classes = None
        self._character_table = None

    def __len__(self):
        return len(self._elements)

    def __repr__(self):
        return "FiniteMatrixGroup(n=%s, order=%s)" % (self._n, len(self))

    @property
    def n(self):
        return self._n

    @property
    def order(self):
        return len(self._elements)

    @property
    def elements(self):
        return self._elements

    @property
    def mult(self):
        return self._mult

    @property
    def inverse(self):
        return self._inverse

    @property
    def generators(self):
        """ element indices of the input generators, in input order """
        return self._generators

    @property
    def generator_words(self):
        return self._words

    def matrix(self, i):
        return self._elements[i]

    def index_of(self, M):
        return self._index.get(matrix_key(M))

    def power(self, i, k):
        _result = 0
        if k < 0:
            i, k = self._inverse[i], -k
        for _ in range(k):
            _result = self._mult[_result][i]
        return _result

    def element_order(self, i):
        if self._orders is None:
            _orders = []
            for j in range(len(self)):
                _o, _x = 1, j
                while _x != 0:
                    _x = self._mult[_x][j]
                    _o += 1
                _orders.append(_o)
            self._orders = _orders
        return self._orders[i]

    @property
    def exponent(self):
        _e = 1
        for i in range(len(self)):
            _o = self.element_order(i)
            _e = _e * _o // math.gcd(_e, _o)
        return _e

    def cyclic_generator(self):
        """ index of an element generating the whole group, or None """
        return next((i for i in range(len(self)) if self.element_order(i) == len(self)), None)

    def is_abelian(self):
        return all(self._mult[i][j] == self._mult[j][i]
                   for i in range(len(self)) for j in range(i + 1, len(self)))

    def conjugacy_classes(self):
        if self._classes is None:
            self._classes = conjugacy_classes(self)
        return self._classes

    def character_table(self):
        if self._character_table is None:
            self._character_table = character_table(self)
        return self._character_table


def _check_generator(n, M):
    _m = np.asarray(M, dtype=object)
    if _m.shape != (n, n):
        raise DimensionMismatch("generator of shape %s on a rank %s lattice"
                                % (_m.shape, n))
    if any(Fraction(x).denominator != 1 for x in _m.flat):
        raise ValueError("generator %s has non-integer entries" % _m.tolist())
    _m = int_matrix(_m.tolist())
    if abs(int_determinant(_m)) != 1:
        raise NotUnimodular("generator %s has determinant %s"
                            % (matrix_key(_m), int_determinant(_m)))
    return _m


def generate_closure(n=None, gens=None, limit=_DEFAULT_CLOSURE_LIMIT):
    """
    Enumerate the group generated by integer matrices.
    :param n: rank (matrix size)
    :param gens: sequence of n x n integer matrices
    :param limit: abort with NotFinite once the closure exceeds this size
    :return: FiniteMatrixGroup
    """
    # args[0]/n=
    if n is None or n < 0:
        raise IndexError("invalid n= argument provided")
    # args[1]/gens=
    _gens = [_check_generator(n, g) for g in (gens or [])]
    _id = identity(n)
    _words = {matrix_key(_id): []}
    _mats = {matrix_key(_id): _id}
    _edges = {}
    _queue = deque([matrix_key(_id)])
    while _queue:
        _x = _queue.popleft()
        for s, g in enumerate(_gens):
            _y = _mats[_x].dot(g)
            _ky = matrix_key(_y)
            _edges[(_x, s)] = _ky
            if _ky not in _mats:
                _mats[_ky] = _y
                _words[_ky] = _words[_x] + [s]
                _queue.append(_ky)
                if len(_mats) > limit:
                    raise NotFinite("closure exceeded %s elements; the generators "
                                    "do not generate a finite group" % limit)
    _idkey = matrix_key(_id)
    _keys = [_idkey] + sorted(k for k in _mats if k != _idkey)
    _pos = {k: i for i, k in enumerate(_keys)}
    _right = [[_pos[_edges[(k, s)]] for s in range(len(_gens))] for k in _keys]
    _wordlist = [_words[k] for k in _keys]
    _order = len(_keys)
    _mult = []
    for i in range(_order):
        _row = []
        for j in range(_order):
            _x = i
            for s in _wordlist[j]:
                _x = _right[_x][s]
            _row.append(_x)
        _mult.append(_row)
    _inverse = [_mult[i].index(0) for i in range(_order)]
    logger.debug("closure of %s generators on rank %s: %s elements",
                 len(_gens), n, _order)
    return FiniteMatrixGroup(
        n=n,
        elements=[_mats[k] for k in _keys],
        mult=_mult,
        inverse=_inverse,
        generators=[_pos[matrix_key(g)] for g in _gens],
        generator_words=_wordlist
    )


def conjugacy_classes(G):
    """
    Partition of element indices into conjugacy classes, ordered by their
    smallest member (so class 0 is the identity).
    """
    _seen = [False] * G.order
    _classes = []
    for x in range(G.order):
        if _seen[x]:
            continue
        _orbit = sorted({G.mult[G.mult[g][x]][G.inverse[g]] for g in range(G.order)})
        for y in _orbit:
            _seen[y] = True
        _classes.append(ConjugacyClass(representative=_orbit[0], members=tuple(_orbit)))
    return _classes


class CharacterTable(object):
    """
    Exact irreducible characters of a finite group. Values are cyclotomic
    numbers of order e = exponent of the group, one per conjugacy class.
    """

    def __init__(self, group=None, classes=None, exponent=None, chars=None):
        if group is None or classes is None or chars is None:
            raise IndexError("invalid group=, classes= or chars= argument")
        self._group = group
        self._classes = classes
        self._exponent = exponent
        self._chars = chars
        self._class_of = [0] * group.order
        for c, cl in enumerate(classes):
            for x in cl.members:
                self._class_of[x] = c
        self._pairing = []
        for i, chi in enumerate(chars):
            _bar = [conjugate(v) for v in chi]
            _j = next((j for j, psi in enumerate(chars)
                       if all(a == b for a, b in zip(psi, _bar))), None)
            if _j is None:
                raise LiftFailed("character %s has no complex conjugate in the table" % i)
            self._pairing.append(_j)

    def __len__(self):
        return len(self._chars)

    @property
    def group(self):
        return self._group

    @property
    def classes(self):
        return self._classes

    @property
    def exponent(self):
        return self._exponent

    @property
    def chars(self):
        return self._chars

    @property
    def conjugation_pairing(self):
        return self._pairing

    @property
    def class_sizes(self):
        return [len(c.members) for c in self._classes]

    def class_of(self, element):
        return self._class_of[element]

    def degree(self, i):
        return int(self._chars[i][0].to_rational())

    def is_real(self, i):
        return self._pairing[i] == i

    def value(self, i, element):
        return self._chars[i][self._class_of[element]]

    def inner_product(self, f, h):
        """ (1/|G|) sum_g f(g) conj(h(g)) for class functions given per class """
        _sum = Cyclotomic.rational(0, self._exponent)
        for size, a, b in zip(self.class_sizes, f, h):
            _sum = _sum + conjugate(b) * a * size
        return _sum / self._group.order

    def verify(self):
        """
        Exact row orthogonality and the degree-sum identity; raises LiftFailed.
        """
        _order = self._group.order
        for i, chi in enumerate(self._chars):
            for j, psi in enumerate(self._chars):
                _ip = self.inner_product(chi, psi)
                if _ip != int(i == j):
                    raise LiftFailed("characters %s and %s fail orthogonality: "
                                     "<chi, psi> = %s" % (i, j, _ip))
        if sum(self.degree(i) ** 2 for i in range(len(self))) != _order:
            raise LiftFailed("degree squares do not sum to |G| = %s" % _order)
        return True


def _abelian_characters(G, classes, e):
    """
    Dual-group enumeration: present G as Z^k / relations in the input
    generators, read off the invariant factors and tensor their characters.
    """
    k = len(G.generators)
    _vec = {0: [0] * k}
    _rels = []
    _queue = deque([0])
    while _queue:
        x = _queue.popleft()
        for s, gi in enumerate(G.generators):
            y = G.mult[x][gi]
            _cand = list(_vec[x])
            _cand[s] += 1
            if y not in _vec:
                _vec[y] = _cand
                _queue.append(y)
            else:
                _diff = [a - b for a, b in zip(_cand, _vec[y])]
                if any(_diff):
                    _rels.append(_diff)
    _fga = fga_from_relations(k, int_matrix(_rels, shape=(0, k)))
    _factors = _fga.invariant_factors
    _coords = {x: _fga.coordinates(int_matrix([v]).reshape(k)) if k else []
               for x, v in _vec.items()}
    _chars = []
    for t in product(*[range(d) for d in _factors]):
        _row = []
        for cl in classes:
            _c = _coords[cl.representative]
            _exp = sum(tj * cj * (e // d) for tj, cj, d in zip(t, _c, _factors))
            _row.append(zeta(e, _exp))
        _chars.append(_row)
    return _chars


def dixon_prime(order, exponent, classes=1):
    """
    smallest prime p = 1 (mod exponent) with p > 2 sqrt(|G|) and p larger
    than the number of classes
    """
    p = max(2 * math.isqrt(order) + 1, exponent, classes)
    while True:
        p = nextprime(p)
        if p % exponent == 1:
            return int(p)


def _eigenspaces(X):
    """
    Eigenspaces of X (acting on column vectors) over its prime field, each
    as a row-reduced basis.
    """
    Fp = X.domain
    p = Fp.mod
    _poly = Poly([int(c) % p for c in X.charpoly()], Symbol('t'), domain=Fp)
    _spaces = []
    for z in _poly.ground_roots():
        _shifted = X - DomainMatrix.diag([Fp(int(z) % p)] * X.shape[0], Fp)
        _spaces.append(_shifted.nullspace().rref()[0])
    return _spaces


def _refine(spaces, M):
    """
    Split every subspace (row-reduced basis S) into the eigenspaces of the
    class matrix M restricted to it.
    """
    _out = []
    for S in spaces:
        d = S.shape[0]
        if d <= 1:
            _out.append(S)
            continue
        _, _pivots = S.rref()
        # column j holds the coordinates of M b_j, read off at the pivots
        _x = (M * S.transpose()).extract(list(_pivots), list(range(d)))
        _found = 0
        for E in _eigenspaces(_x):
            _found += E.shape[0]
            _out.append((E * S).rref()[0])
        if _found != d:
            raise LiftFailed("class matrix is not diagonalizable over F_%s" % M.domain.mod)
    return _out


def _dixon_characters(G, classes, e):
    """
    Characters from simultaneous eigenvectors of the class multiplication
    matrices over F_p, lifted to exact cyclotomic values through the
    eigenvalue multiplicities of each element.
    """
    k = len(classes)
    _order = G.order
    _class_of = [0] * _order
    for c, cl in enumerate(classes):
        for x in cl.members:
            _class_of[x] = c
    _sizes = [len(cl.members) for cl in classes]
    p = dixon_prime(_order, e, k)
    z = pow(int(primitive_root(p)), (p - 1) // e, p)
    logger.debug("character table of a group of order %s: %s classes, p = %s",
                 _order, k, p)
    # a[r][s][t] = #{x in C_r : x^-1 g_t in C_s}
    _a = [[[0] * k for _ in range(k)] for _ in range(k)]
    for t, cl in enumerate(classes):
        g = cl.representative
        for x in range(_order):
            y = G.mult[G.inverse[x]][g]
            _a[_class_of[x]][_class_of[y]][t] += 1
    Fp = GF(p)
    _spaces = [DomainMatrix.eye(k, Fp)]
    for r in range(1, k):
        if all(s.shape[0] == 1 for s in _spaces):
            break
        _spaces = _refine(_spaces, DomainMatrix.from_list(_a[r], Fp))
    if len(_spaces) != k or any(s.shape[0] != 1 for s in _spaces):
        raise LiftFailed("class matrices did not separate the %s characters" % k)
    _inv_class = [_class_of[G.inverse[cl.representative]] for cl in classes]
    _chars = []
    for _space in _spaces:
        _v = [int(x) % p for x in _space.to_list()[0]]
        if _v[0] == 0:
            raise LiftFailed("central character vanishes on the identity class")
        _scale = pow(_v[0], p - 2, p)
        _omega = [(x * _scale) % p for x in _v]
        _s = sum(_omega[t] * _omega[_inv_class[t]] * pow(_sizes[t], p - 2, p)
                 for t in range(k)) % p
        if _s == 0:
            raise LiftFailed("degenerate norm while recovering a character degree")
        _target = (_order * pow(_s, p - 2, p)) % p
        _root = sqrt_mod(_target, p)
        _deg = min(_root, p - _root) if _root is not None else None
        if not _deg or _deg * _deg > _order:
            raise LiftFailed("no character degree squares to %s mod %s" % (_target, p))
        _modvals = [(_omega[t] * _deg * pow(_sizes[t], p - 2, p)) % p for t in range(k)]
        _row = []
        for cl in classes:
            g = cl.representative
            o = G.element_order(g)
            _zo = pow(z, e // o, p)
            _inv_o = pow(o, p - 2, p)
            _terms = []
            for kk in range(o):
                _m = sum(_modvals[_class_of[G.power(g, j)]] * pow(_zo, (-j * kk) % o, p)
                         for j in range(o)) * _inv_o % p
                if _m > _deg:
                    raise LiftFailed("eigenvalue multiplicity %s exceeds degree %s"
                                     % (_m, _deg))
                _terms.append((kk * (e // o), _m))
            _row.append(Cyclotomic.from_exponents(e, _terms))
        _chars.append(_row)
    return _chars


def character_table(G):
    """
    Complete exact character table of a finite matrix group. Orthogonality
    is verified exactly before returning; a failure raises LiftFailed.
    """
    classes = G.conjugacy_classes()
    e = G.exponent
    if G.is_abelian():
        _chars = _abelian_characters(G, classes, e)
    else:
        _chars = _dixon_characters(G, classes, e)
        _chars.sort(key=lambda row: (any(v != 1 for v in row),
                                     row[0].to_rational(),
                                     tuple(v.coeffs for v in row)))
    _table = CharacterTable(group=G, classes=classes, exponent=e, chars=_chars)
    _table.verify()
    return _table


def multiplicity(table, classfun, chi_index):
    """
    n_chi = <classfun, chi>, which must be a non-negative integer.
    :param table: CharacterTable
    :param classfun: one value per conjugacy class
    :param chi_index: row of the table
    """
    _ip = table.inner_product(list(classfun), table.chars[chi_index])
    if isinstance(_ip, Cyclotomic):
        if not _ip.is_rational():
            raise NotIntegral("inner product %s is irrational" % _ip)
        _ip = _ip.to_rational()
    _ip = Fraction(_ip)
    if _ip.denominator != 1 or _ip < 0:
        raise NotIntegral("inner product %s is not a non-negative integer; the "
                          "class function is not a character" % _ip)
    return int(_ip)
