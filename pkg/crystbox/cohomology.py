#!/usr/bin/env python3
"""
Group cohomology H^k(G, M), k <= 2, from the normalized bar complex, for
G-lattices Z^n, rescaled lattices (1/d) Z^n, overlattices and finite
quotients of them; extension classes of crystallographic groups and the
three splitting criteria for an overlattice.

A k-cochain is stored as one flat integer vector: the values f(g_1..g_k)
for all tuples of non-identity elements (itertools.product order), each
contributing a block of rank-many module coordinates.
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import logging

from collections import namedtuple
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from crystbox.exact_linalg import (
    int_matrix, rat_matrix, rat_vector, identity, matrix_key, mod_one,
    is_integral, common_denominator, rank, inverse, integer_kernel,
    lattice_basis, solve_congruence, solve_integer_system,
    solve_integer_congruence, fga_from_relations, fga_element_order,
    parse_rational, DimensionMismatch
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

_DEFAULT_FIXED_POINT_LIMIT = 4096

_MODULE_KINDS = ("lattice", "scaled", "overlattice", "quotient")

ExtensionClass = namedtuple("ExtensionClass",
                            ["cocycle", "class_coords", "order", "cohomology"])
SplittingResult = namedtuple("SplittingResult",
                             ["realizable", "class_vanishes", "has_fixed_point",
                              "shift", "fixed_point"])


class ActionMismatch(ValueError):
    pass


class NotInvariant(ValueError):
    pass


class SplittingInconsistency(RuntimeError):
    pass


def _to_int(M):
    _m = np.asarray(M, dtype=object)
    _out = np.empty(_m.shape, dtype=object)
    for idx, x in np.ndenumerate(_m):
        _out[idx] = int(x)
    return _out


class GModule(object):
    """
    A G-module of rank n written in lattice coordinates. For an overlattice
    or a scaled lattice with basis B (columns), coordinates are y = B^-1 v
    and g acts by B^-1 L(g) B; the quotient Lambda'/Z^n uses the same
    coordinates with the columns of B^-1 as relations.
    """

    def __init__(self, group=None, kind="lattice", action=None, basis=None):
        if group is None:
            raise IndexError("invalid group= argument provided")
        if kind not in _MODULE_KINDS:
            raise ValueError("unknown module kind %r; expected one of %s"
                             % (kind, ", ".join(_MODULE_KINDS)))
        self._group = group
        self._kind = kind
        if action is None:
            action = group.elements
        if len(action) != group.order:
            raise ActionMismatch("%s action matrices for a group of order %s"
                                 % (len(action), group.order))
        _action = [rat_matrix(np.asarray(a, dtype=object).tolist()) for a in action]
        n = _action[0].shape[0]
        if basis is None:
            basis = identity(n)
        self._basis = rat_matrix(np.asarray(basis, dtype=object).tolist())
        if self._basis.shape != (n, n) or rank(self._basis) != n:
            raise DimensionMismatch("module basis must be a nonsingular %sx%s matrix" % (n, n))
        self._binv = inverse(self._basis)
        if not is_integral(self._binv):
            raise ValueError("the lattice spanned by the basis does not contain Z^%s" % n)
        _local = [self._binv.dot(a).dot(self._basis) for a in _action]
        for g, a in enumerate(_local):
            if not is_integral(a):
                raise NotInvariant("the lattice is not preserved by element %s" % g)
        self._action = [_to_int(a) for a in _local]
        for g in range(group.order):
            for h in range(group.order):
                if matrix_key(self._action[g].dot(self._action[h])) != \
                        matrix_key(self._action[group.mult[g][h]]):
                    raise ActionMismatch("action matrices do not respect the group "
                                         "table at (%s, %s)" % (g, h))
        # the action alone does not determine the group when it is not faithful
        self._key = (kind, tuple(tuple(r) for r in group.mult),
                     tuple(matrix_key(a) for a in self._action),
                     tuple(tuple(Fraction(x) for x in r) for r in self._basis))

    @classmethod
    def lattice(cls, group, action=None):
        return cls(group, "lattice", action)

    @classmethod
    def scaled(cls, group, d, action=None):
        """ (1/d) Z^n """
        if d < 1:
            raise ValueError("invalid d= argument; expected a positive integer")
        n = group.n if action is None else len(action[0])
        return cls(group, "scaled", action, rat_matrix(identity(n)) / d)

    @classmethod
    def overlattice(cls, group, basis, action=None):
        return cls(group, "overlattice", action, basis)

    @classmethod
    def quotient(cls, group, basis, action=None):
        """ Lambda' / Z^n for the overlattice Lambda' with the given basis """
        return cls(group, "quotient", action, basis)

    def __eq__(self, other):
        return isinstance(other, GModule) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "GModule(%s, rank=%s, |G|=%s)" % (self._kind, self.rank, self._group.order)

    @property
    def kind(self):
        return self._kind

    @property
    def group(self):
        return self._group

    @property
    def rank(self):
        return self._basis.shape[0]

    @property
    def basis(self):
        return self._basis

    @property
    def basis_inverse(self):
        return self._binv

    def action(self, g):
        return self._action[g]

    @property
    def relations(self):
        """ columns generate the submodule divided out (quotient kind only) """
        if self._kind != "quotient":
            return int_matrix([], shape=(self.rank, 0))
        return _to_int(self._binv)

    def presentation(self):
        """ the underlying abelian group of a quotient module """
        return fga_from_relations(self.rank, _to_int(self._binv).T)

    def coordinates(self, v):
        """ module coordinates B^-1 v of an ambient vector """
        return self._binv.dot(rat_vector(v))


def cochain_index(G, k):
    """ tuples of non-identity element indices carrying a k-cochain """
    return list(product(range(1, G.order), repeat=k))


def coboundary_matrix(M, k):
    """
    Matrix of d^k: C^k(G, M) -> C^(k+1)(G, M) on normalized cochains,
    (d f)(g_1..g_k+1) = g_1 f(g_2..) + sum_i (-1)^i f(.., g_i g_i+1, ..)
    + (-1)^(k+1) f(g_1..g_k).
    """
    G = M.group
    n = M.rank
    _src = {t: i for i, t in enumerate(cochain_index(G, k))}
    _dst = cochain_index(G, k + 1)
    _d = np.zeros((len(_dst) * n, len(_src) * n), dtype=object)
    _id = identity(n)

    def add(row, t, block, sign):
        if 0 in t:
            return
        c = _src[t] * n
        _d[row:row + n, c:c + n] += sign * block

    for r, t in enumerate(_dst):
        row = r * n
        add(row, t[1:], M.action(t[0]), 1)
        for i in range(1, k + 1):
            _merged = t[:i - 1] + (G.mult[t[i - 1]][t[i]],) + t[i + 1:]
            add(row, _merged, _id, (-1) ** i)
        add(row, t[:k], _id, (-1) ** (k + 1))
    return _d


def _block_diagonal(R, copies):
    n, c = R.shape
    _out = np.zeros((n * copies, c * copies), dtype=object)
    for i in range(copies):
        _out[i * n:(i + 1) * n, i * c:(i + 1) * c] = R
    return _out


class CohomologyGroup(object):
    """
    H^k(G, M) as an FgaGroup, with coordinates of a cocycle and a
    representative cocycle for given coordinates.
    """

    def __init__(self, module, degree, fga, section, basis, is_cocycle):
        self._module = module
        self._degree = degree
        self._fga = fga
        # fga before composing with the basis change, and the cocycle basis
        self._section = section
        self._cocycle_basis = basis
        self._is_cocycle = is_cocycle

    def __repr__(self):
        return "H^%s = %s" % (self._degree, self._fga.describe())

    @property
    def module(self):
        return self._module

    @property
    def degree(self):
        return self._degree

    @property
    def fga(self):
        return self._fga

    @property
    def invariant_factors(self):
        return self._fga.invariant_factors

    def describe(self):
        return self._fga.describe()

    def coordinates(self, cochain):
        """ class coordinates of a cocycle given as a flat vector """
        _x = np.asarray(cochain, dtype=object)
        if not self._is_cocycle(_x):
            raise ValueError("cochain is not a cocycle of degree %s" % self._degree)
        return self._fga.coordinates(_x)

    def representative(self, coords):
        """ a cocycle (flat integer vector) in the class with these coordinates """
        _y = solve_integer_system(self._section.to_coords,
                                  [int(c) for c in coords]) \
            if self._section.invariant_factors else []
        _y = np.asarray(list(_y) + [0] * (self._cocycle_basis.shape[1] - len(_y)),
                        dtype=object)
        return _to_int(self._cocycle_basis.dot(_y))


@lru_cache(maxsize=64)
def _cohomology(module, degree):
    n = module.rank
    G = module.group
    _dk = coboundary_matrix(module, degree)
    _size = _dk.shape[1]
    _prev = coboundary_matrix(module, degree - 1) if degree > 0 else \
        np.zeros((_size, 0), dtype=object)
    logger.debug("H^%s(G, %s module of rank %s): d^%s is %sx%s", degree, module.kind,
                 n, degree, _dk.shape[0], _dk.shape[1])
    if module.kind != "quotient":
        _k, _left = integer_kernel(_dk)
        _rels = _left.dot(_prev)
        _section = fga_from_relations(_k.shape[1], _rels.T)
        _fga = _section.precompose(_left)
        return CohomologyGroup(module, degree, _fga, _section, _k,
                               lambda x: not any(_dk.dot(x)))
    # Z^k = {x : d^k x in R^(k+1)}, B^k = im d^(k-1) + R^k
    _rk = _block_diagonal(module.relations, _size // n if n else 0)
    _rk1 = _block_diagonal(module.relations, _dk.shape[0] // n if n else 0)
    _joint = np.hstack([_dk, _rk1])
    _k, _ = integer_kernel(_joint)
    _gens = [list(_k[:_size, j]) for j in range(_k.shape[1])]
    _zb = lattice_basis(_gens, _size)
    _zbi = inverse(_zb)
    _rels = _zbi.dot(np.hstack([_prev, _rk]))
    _section = fga_from_relations(_size, _to_int(_rels.T))
    _fga = _section.precompose(_zbi)

    def _is_cocycle(x):
        return solve_integer_system(_rk1, _dk.dot(x)) is not None

    return CohomologyGroup(module, degree, _fga, _section, _zb, _is_cocycle)


def cohomology_group(G, M, degree):
    """
    H^degree(G, M) for degree 0, 1 or 2.
    :param G: FiniteMatrixGroup
    :param M: GModule over G
    :return: CohomologyGroup
    """
    if degree not in (0, 1, 2):
        raise ValueError("cohomology is computed in degrees 0, 1 and 2 only")
    if M.group.order != G.order or any(
            matrix_key(a) != matrix_key(b) for a, b in zip(M.group.elements, G.elements)):
        raise ActionMismatch("module is defined over a different group")
    return _cohomology(M, degree)


def cochain_vector(G, k, values, n):
    """ flatten {tuple: vector} into the cochain layout used above """
    _out = []
    for t in cochain_index(G, k):
        _out.extend(values.get(t, [0] * n))
    return np.asarray(_out, dtype=object)


def _epsilon(C):
    return {(g, h): [int(x) for x in C.cocycle(g, h)]
            for g in range(1, C.order) for h in range(1, C.order)}


def extension_class(C):
    """
    The class of epsilon(g, h) = u_g + L(g) u_h - u_gh in H^2(G, Z^n).
    :param C: valid CrystGroup
    :return: ExtensionClass
    """
    for g, h in product(range(C.order), repeat=2):
        if not is_integral(C.cocycle(g, h)):
            raise ValueError("vector system is not a cocycle mod Z^n at (%s, %s)" % (g, h))
    _eps = _epsilon(C)
    _h2 = cohomology_group(C.group, GModule.lattice(C.group), 2)
    _coords = _h2.coordinates(cochain_vector(C.group, 2, _eps, C.n))
    return ExtensionClass(cocycle=_eps, class_coords=_coords,
                          order=fga_element_order(_h2.fga, _coords), cohomology=_h2)


def extension_class_in(C, basis):
    """
    Image of the extension class in H^2(G, Lambda') for the overlattice with
    the given basis, computed by rewriting epsilon in Lambda'-coordinates.
    """
    _module = GModule.overlattice(C.group, basis)
    _eps = {k: list(_module.coordinates(v)) for k, v in _epsilon(C).items()}
    _h2 = cohomology_group(C.group, _module, 2)
    _coords = _h2.coordinates(cochain_vector(C.group, 2, _eps, C.n))
    return ExtensionClass(cocycle=_eps, class_coords=_coords,
                          order=fga_element_order(_h2.fga, _coords), cohomology=_h2)


def parse_overlattice(data, n):
    """
    Read {"basis": [[p/q, ...], ...]} listing the basis vectors of Lambda'.
    :return: rational n x n matrix with the basis vectors as columns
    """
    if not isinstance(data, dict) or "basis" not in data:
        raise ValueError("expected a JSON object with key 'basis'")
    _vectors = data["basis"]
    if len(_vectors) != n or any(len(v) != n for v in _vectors):
        raise ValueError("overlattice basis must list %s vectors of length %s" % (n, n))
    return rat_matrix([[parse_rational(_vectors[j][i]) for j in range(n)]
                       for i in range(n)])


def scaled_basis(n, d):
    """ basis of (1/d) Z^n """
    return rat_matrix(identity(n)) / d


def _local_system(C, module):
    """ (L'(g) - I) stacked and B^-1 u_g stacked over g != 1 """
    _id = identity(C.n)
    _a = np.vstack([module.action(g) - _id for g in range(1, C.order)]) \
        if C.order > 1 else np.zeros((0, C.n), dtype=object)
    _u = [module.coordinates(C.translation(g)) for g in range(C.order)]
    return _a, _u


def _fixed_point_system(C, module):
    """
    Integer form (L'(g) - I) y = -N u'_g (mod N) of the fixed-point equation
    on the grid (1/N) Lambda' / Lambda'.
    """
    _a, _u = _local_system(C, module)
    N = C.order * common_denominator([x for v in _u for x in v])
    _c = [-int(x * N) for g in range(1, C.order) for x in _u[g]]
    return _a, _u, N, _c


def _is_fixed(C, module, w):
    return all(is_integral(module.action(g).dot(w) + module.coordinates(C.translation(g)) - w)
               for g in range(C.order))


def splitting_equivalence(C, basis):
    """
    Decide independently whether C splits over the overlattice Lambda':
    (a) some translation conjugate has all u_g in Lambda',
    (b) epsilon maps to zero in H^2(G, Lambda'),
    (c) the affine action has a fixed point in V_Q / Lambda'.
    :param C: valid CrystGroup
    :param basis: rational matrix whose columns are a basis of Lambda'
    :return: SplittingResult with the shift w for (a) and a fixed point for
    (c), both in ambient coordinates
    """
    _module = GModule.overlattice(C.group, basis)
    _b = _module.basis
    _a, _u = _local_system(C, _module)
    # (a)
    _w = solve_congruence(_a, [x for g in range(1, C.order) for x in _u[g]], 1) \
        if C.order > 1 else rat_vector([0] * C.n)
    realizable = _w is not None
    # (b)
    _eps = {k: list(_module.coordinates(v)) for k, v in _epsilon(C).items()}
    _d1 = coboundary_matrix(_module, 1)
    class_vanishes = solve_integer_system(
        _d1, [int(x) for x in cochain_vector(C.group, 2, _eps, C.n)]) is not None
    # (c)
    _fixed = _fixed_point(C, _module)
    has_fixed_point = _fixed is not None
    if not realizable == class_vanishes == has_fixed_point:
        raise SplittingInconsistency(
            "splitting criteria disagree: realization %s, class %s, fixed point %s"
            % (realizable, class_vanishes, has_fixed_point))
    logger.debug("splitting over overlattice: %s", realizable)
    return SplittingResult(
        realizable=realizable, class_vanishes=class_vanishes,
        has_fixed_point=has_fixed_point,
        shift=_b.dot(_w) if realizable else None,
        fixed_point=_b.dot(mod_one(_fixed)) if has_fixed_point else None)


def _fixed_point(C, module):
    """ one fixed point in Lambda'-coordinates, or None """
    _avg = sum((module.coordinates(C.translation(g)) for g in range(1, C.order)),
               rat_vector([0] * C.n)) / C.order
    if _is_fixed(C, module, _avg):
        return _avg
    _a, _u, N, _c = _fixed_point_system(C, module)
    _sol = solve_integer_congruence(_a, _c, N)
    if _sol is None:
        return None
    return rat_vector([Fraction(int(y), N) for y in _sol[0]])


def affine_fixed_points(C, basis, limit=_DEFAULT_FIXED_POINT_LIMIT):
    """
    Fixed points of v -> L(g) v + u_g (mod Lambda') on the grid
    (1/N) Lambda' / Lambda', N = |G| * denominator of the translations in
    Lambda'-coordinates. Every fixed component meets the grid.
    :return: list of ambient vectors, one per class mod Lambda'
    """
    _module = GModule.overlattice(C.group, basis)
    _a, _u, N, _c = _fixed_point_system(C, _module)
    _sol = solve_integer_congruence(_a, _c, N)
    if _sol is None:
        return []
    _y0, _gens, _moduli = _sol
    _found = {}
    for _t in product(*[range(m) for m in _moduli]):
        if len(_found) >= limit:
            logger.warning("affine_fixed_points(): listing cut at %s classes", limit)
            break
        _y = _y0 + sum((t * g for t, g in zip(_t, _gens)),
                       np.zeros(C.n, dtype=object))
        _key = tuple(int(y) % N for y in _y)
        if _key not in _found:
            _found[_key] = rat_vector([Fraction(y, N) for y in _key])
    _points = []
    for _w in sorted(_found.values(), key=lambda v: tuple(v)):
        if not _is_fixed(C, _module, _w):
            raise RuntimeError("grid solution %s is not fixed" % list(_w))
        _points.append(_module.basis.dot(_w))
    return _points
