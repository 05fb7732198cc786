#!/usr/bin/env python3
"""
Isotypical decomposition of the lattice representation, evenness, Hodge
types and the dimensions of the corresponding families of complex
structures, plus one explicit G-invariant complex structure per Hodge type.
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import math
import logging

from collections import namedtuple
from itertools import combinations, permutations, product

import numpy as np

from crystbox.exact_linalg import (
    identity, rank, column_space, inverse, determinant
)
from crystbox.cyclotomic import (
    Cyclotomic, zeta, cyclotomic_matrix, conjugate_matrix, to_complex_array
)
from crystbox.finite_matrix_group import multiplicity

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# tau = a + b i for the subspaces span(b_2k-1 + tau b_2k) of real characters
_CANDIDATE_SCALARS = ((0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (0, 3), (-1, 1), (3, 1))
_MAX_SUBSPACE_CHOICES = 512

CharacterData = namedtuple("CharacterData",
                           ["index", "label", "degree", "multiplicity", "real", "partner"])
EvennessReport = namedtuple("EvennessReport", ["even", "rank_even", "breakdown"])
GrassmannianFactor = namedtuple("GrassmannianFactor",
                                ["characters", "nu", "multiplicity", "dimension"])
ComponentReport = namedtuple("ComponentReport", ["hodge_type", "dimension", "factors"])
ComplexStructureSample = namedtuple(
    "ComplexStructureSample",
    ["hodge_type", "J", "omega", "orientation_sign", "conjugate_type",
     "recovered_type", "J_float", "omega_float"])


class NotEven(ValueError):
    pass


class NoDecomposition(RuntimeError):
    pass


def character_label(i):
    return "X.%s" % (i + 1)


def lattice_character(C):
    """ trace of L(g), one integer per conjugacy class """
    return [int(np.trace(C.linear(cl.representative)))
            for cl in C.group.conjugacy_classes()]


class IsotypicalData(object):
    """
    Multiplicities n_chi of the irreducible characters in the lattice
    representation, with their degrees and reality.
    """

    def __init__(self, rank=None, table=None, characters=None):
        self._rank = rank
        self._table = table
        self._characters = list(characters or [])

    def __repr__(self):
        return "IsotypicalData(rank=%s, %s)" % (
            self._rank, ", ".join("%s:%s" % (c.label, c.multiplicity)
                                  for c in self.present()))

    @property
    def rank(self):
        return self._rank

    @property
    def table(self):
        return self._table

    @property
    def characters(self):
        return self._characters

    def present(self):
        return [c for c in self._characters if c.multiplicity]

    def real_characters(self):
        return [c for c in self.present() if c.real]

    def pairs(self):
        """ unordered non-real pairs (chi, conj chi) occurring in the lattice """
        return [(c, self._characters[c.partner]) for c in self.present()
                if not c.real and c.index < c.partner]


def isotypical_decomposition(C):
    """
    :param C: valid CrystGroup
    :return: IsotypicalData
    """
    table = C.group.character_table()
    _chi = lattice_character(C)
    _chars = []
    for i in range(len(table)):
        _chars.append(CharacterData(index=i, label=character_label(i),
                                    degree=table.degree(i),
                                    multiplicity=multiplicity(table, _chi, i),
                                    real=table.is_real(i),
                                    partner=table.conjugation_pairing[i]))
    if sum(c.degree * c.multiplicity for c in _chars) != C.n:
        raise RuntimeError("isotypical dimensions do not add up to the rank %s" % C.n)
    return IsotypicalData(rank=C.n, table=table, characters=_chars)


def evenness(data):
    """
    Even iff the rank is even and every real character has even multiplicity.
    :return: EvennessReport with one (label, n_chi, real, ok) row per character
    """
    _rows = [(c.label, c.multiplicity, c.real, not c.real or c.multiplicity % 2 == 0)
             for c in data.present()]
    _rank_even = data.rank % 2 == 0
    return EvennessReport(even=_rank_even and all(r[3] for r in _rows),
                          rank_even=_rank_even, breakdown=_rows)


class HodgeType(object):
    """
    chi -> nu(chi) = dim of the (1,0)-part of M_chi, stored for every
    character occurring in the lattice.
    """

    def __init__(self, nu=None):
        self._nu = dict(sorted((int(k), int(v)) for k, v in (nu or {}).items()))

    def __eq__(self, other):
        return isinstance(other, HodgeType) and self._nu == other._nu

    def __hash__(self):
        return hash(tuple(self._nu.items()))

    def __repr__(self):
        return "HodgeType(%s)" % ", ".join("%s=%s" % (character_label(k), v)
                                            for k, v in self._nu.items())

    def nu(self, chi):
        return self._nu.get(chi, 0)

    def items(self):
        return list(self._nu.items())

    def conjugate(self, data):
        """ the type of the conjugate complex structure: nu'(chi) = nu(conj chi) """
        return HodgeType({k: self.nu(data.characters[k].partner) for k in self._nu})

    def check(self, data):
        for c in data.present():
            _nu = self.nu(c.index)
            if c.real and 2 * _nu != c.multiplicity:
                raise ValueError("nu(%s) must be %s for a real character"
                                 % (c.label, c.multiplicity // 2))
            if not c.real and _nu + self.nu(c.partner) != c.multiplicity:
                raise ValueError("nu(%s) + nu(%s) must equal %s"
                                 % (c.label, character_label(c.partner), c.multiplicity))
            if not 0 <= _nu <= c.multiplicity:
                raise ValueError("nu(%s) out of range" % c.label)

    def to_dict(self):
        return {character_label(k): v for k, v in self._nu.items()}


def enumerate_hodge_types(data):
    """
    All Hodge types: nu = n_chi / 2 on real characters, and for every
    non-real pair nu(chi) + nu(conj chi) = n_chi. Empty unless even.
    """
    if not evenness(data).even:
        return []
    _fixed = {c.index: c.multiplicity // 2 for c in data.real_characters()}
    _pairs = data.pairs()
    _types = []
    for _choice in product(*[range(a.multiplicity + 1) for a, _ in _pairs]):
        _nu = dict(_fixed)
        for (a, b), v in zip(_pairs, _choice):
            _nu[a.index] = v
            _nu[b.index] = a.multiplicity - v
        _types.append(HodgeType(_nu))
    return _types


def component_dimensions(data):
    """
    One ComponentReport per Hodge type. Real characters contribute
    Gr(n/2, n), a non-real pair two Grassmannians Gr(nu, n).
    """
    _reports = []
    for t in enumerate_hodge_types(data):
        _factors = []
        for c in data.real_characters():
            h = c.multiplicity // 2
            _factors.append(GrassmannianFactor((c.index,), h, c.multiplicity, h * h))
        for a, b in data.pairs():
            v = t.nu(a.index)
            _factors.append(GrassmannianFactor((a.index, b.index), v, a.multiplicity,
                                               2 * v * (a.multiplicity - v)))
        _reports.append(ComponentReport(hodge_type=t,
                                        dimension=sum(f.dimension for f in _factors),
                                        factors=_factors))
    return _reports


#
# sample complex structure
#

def _columns(M):
    return [list(M[:, j]) for j in range(M.shape[1])]


def _as_matrix(vectors, n):
    _m = np.empty((n, len(vectors)), dtype=object)
    for j, v in enumerate(vectors):
        for i in range(n):
            _m[i, j] = v[i]
    return _m


def _slice(C, table, chi, order):
    """
    (h, a) with lambda = zeta^a an eigenvalue of multiplicity one in chi
    restricted to <h>; real lambda first for real characters.
    """
    G = C.group
    _candidates = []
    for h in range(G.order):
        o = G.element_order(h)
        for k in range(o):
            a = k * order // o
            _m = sum((table.value(chi, G.power(h, j)) * zeta(order, -a * j) for j in range(o)),
                     Cyclotomic.rational(0, order)) / o
            if _m == 1:
                _candidates.append((h, a, k * 2 % o == 0))
    if not _candidates:
        raise NoDecomposition("no element has an eigenvalue of multiplicity one in %s"
                              % character_label(chi))
    if table.is_real(chi):
        _candidates.sort(key=lambda c: not c[2])
    return _candidates[0][:2]


def _isotypical_slice(C, table, chi, order, lin):
    """ basis of U_chi cap ker(L(h) - lambda), a copy of M_chi """
    G = C.group
    _deg = table.degree(chi)
    _proj = sum((lin[g] * table.value(chi, g).conjugate() for g in range(G.order)),
                cyclotomic_matrix(np.zeros((C.n, C.n), dtype=object), order)) \
        * Cyclotomic.rational(_deg, order) / G.order
    h, a = _slice(C, table, chi, order)
    o = G.element_order(h)
    _pi = sum((lin[G.power(h, j)] * zeta(order, -a * j) for j in range(o)),
              cyclotomic_matrix(np.zeros((C.n, C.n), dtype=object), order)) / o
    _basis = column_space(_columns(_proj.dot(_pi)))
    return _proj, _basis


def _g_span(lin, vectors, n):
    if not vectors:
        return []
    _v = _as_matrix(vectors, n)
    return column_space([c for L in lin for c in _columns(L.dot(_v))])


def _conj(vectors):
    return [[x.conjugate() for x in v] for v in vectors]


def _direct(H, Hbar, expected):
    return len(H) + len(Hbar) == expected and \
        rank([list(v) for v in H] + [list(v) for v in Hbar]) == expected


def _real_choices(basis, nu, order):
    """ deterministic sequence of candidate nu-dimensional subspaces """
    _count = 0
    for _perm in permutations(range(len(basis))):
        for a, b in _CANDIDATE_SCALARS:
            _tau = Cyclotomic.rational(a, order) + zeta(order, order // 4) * b
            yield [[x + _tau * y for x, y in zip(basis[_perm[2 * k]], basis[_perm[2 * k + 1]])]
                   for k in range(nu)]
            _count += 1
            if _count >= _MAX_SUBSPACE_CHOICES:
                return


def _pair_choices(basis, nu):
    n = len(basis)
    for _idx in combinations(range(n), nu):
        _rest = [i for i in reversed(range(n)) if i not in _idx]
        yield [basis[i] for i in _idx], _conj([basis[i] for i in _rest])


def sample_complex_structure(C, t, data=None):
    """
    Build J = B diag(i, -i) B^-1 with B = [Omega | conj Omega], Omega
    spanning a G-invariant H^{1,0} of the requested Hodge type. Every
    invariant is verified in exact cyclotomic arithmetic.
    :param C: valid CrystGroup
    :param t: HodgeType
    :return: ComplexStructureSample
    """
    if data is None:
        data = isotypical_decomposition(C)
    if not evenness(data).even:
        raise NotEven("the lattice representation is not even; no G-invariant "
                      "complex structure exists")
    t.check(data)
    table = data.table
    n = C.n
    order = table.exponent * 4 // math.gcd(table.exponent, 4)
    _i = zeta(order, order // 4)
    lin = [cyclotomic_matrix(C.linear(g), order) for g in range(C.order)]
    _projectors = {}
    _omega = []
    for c in data.real_characters():
        _proj, _basis = _isotypical_slice(C, table, c.index, order, lin)
        _projectors[c.index] = _proj
        _expected = c.degree * c.multiplicity
        for _s in _real_choices(_basis, c.multiplicity // 2, order):
            _h = _g_span(lin, _s, n)
            if _direct(_h, _conj(_h), _expected):
                _omega.extend(_h)
                break
            logger.warning("subspace choice for %s violates the direct sum "
                           "condition; trying the next one", c.label)
        else:
            raise NoDecomposition("no subspace choice for %s satisfies the direct "
                                  "sum condition" % c.label)
    for a, b in data.pairs():
        _proj, _basis = _isotypical_slice(C, table, a.index, order, lin)
        _projectors[a.index] = _proj
        _projectors[b.index] = conjugate_matrix(_proj)
        _expected = a.degree * a.multiplicity
        _nu = t.nu(a.index)
        for _s, _sbar in _pair_choices(_basis, _nu):
            _h, _hbar = _g_span(lin, _s, n), _g_span(lin, _sbar, n)
            if _direct(_h, _conj(_hbar), _expected):
                _omega.extend(_h)
                _omega.extend(_hbar)
                break
            logger.warning("subspace choice for the pair %s, %s violates the direct "
                           "sum condition; trying the next one", a.label, b.label)
        else:
            raise NoDecomposition("no subspace choice for the pair %s, %s satisfies "
                                  "the direct sum condition" % (a.label, b.label))
    if 2 * len(_omega) != n:
        raise NoDecomposition("H^{1,0} has dimension %s, expected %s" % (len(_omega), n // 2))
    omega = _as_matrix(_omega, n)
    _b = _as_matrix(_omega + _conj(_omega), n)
    _diag = cyclotomic_matrix(np.zeros((n, n), dtype=object), order)
    for k in range(n):
        _diag[k, k] = _i if k < n // 2 else -_i
    J = _b.dot(_diag).dot(inverse(_b))
    _check_structure(C, J, lin, order)
    _recovered = HodgeType({c.index: rank(_columns(_projectors[c.index].dot(omega))) // c.degree
                            for c in data.present()})
    if _recovered != t:
        raise NoDecomposition("constructed structure has type %s, requested %s"
                              % (_recovered, t))
    _sign = (_i ** (n // 2) * determinant(_b))
    logger.debug("complex structure of type %s sampled", t)
    return ComplexStructureSample(
        hodge_type=t, J=J, omega=omega, orientation_sign=_sign.sign(),
        conjugate_type=t.conjugate(data), recovered_type=_recovered,
        J_float=to_complex_array(J).real, omega_float=to_complex_array(omega))


def _check_structure(C, J, lin, order):
    n = C.n
    _minus = cyclotomic_matrix(-identity(n), order)
    if any(a != b for a, b in zip(J.dot(J).flat, _minus.flat)):
        raise NoDecomposition("J^2 != -I")
    if any(a != b for a, b in zip(J.flat, conjugate_matrix(J).flat)):
        raise NoDecomposition("J is not real")
    for g, L in enumerate(lin):
        if any(a != b for a, b in zip(L.dot(J).flat, J.dot(L).flat)):
            raise NoDecomposition("J does not commute with element %s" % g)
