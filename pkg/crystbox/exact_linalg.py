#!/usr/bin/env python3
"""
Exact integer / rational matrix algebra. Normal forms and elimination run on
sympy DomainMatrix objects over ZZ, QQ, GF(p) and cyclotomic fields; the
Diophantine and congruence solvers and finitely generated abelian groups
sit on top of the Smith decomposition. Matrices handed back to callers are
numpy arrays of dtype=object holding Python ints, Fractions or cyclotomic
numbers, so every product and sum stays exact.
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import sys
import math
import logging

from fractions import Fraction
from functools import reduce

import numpy as np

from sympy import ZZ, QQ, GF
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError
from sympy.polys.matrices.normalforms import (
    smith_normal_decomp, hermite_normal_form as _column_hnf,
    invariant_factors as _invariant_factors
)

from crystbox.cyclotomic import (
    Cyclotomic, as_cyclotomic, cyclotomic_domain, to_field_element, from_field_element
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# large prime used to pick rationally independent rows before an exact
# kernel computation
_KERNEL_PRIME = 2305843009213693951


class DimensionMismatch(ValueError):
    pass


def int_matrix(rows=None, shape=None):
    """
    Build an exact integer matrix (numpy object array) from nested sequences.
    :param rows: nested list / tuple / array of integers
    :param shape: optional (rows, cols) used when rows is empty
    :return: numpy.ndarray of dtype object
    """
    if rows is None:
        rows = []
    _rows = [[int(x) for x in r] for r in rows]
    if not _rows:
        if shape is None:
            shape = (0, 0)
        return np.zeros(shape, dtype=object)
    _width = len(_rows[0])
    if any(len(r) != _width for r in _rows):
        raise DimensionMismatch("ragged rows passed to int_matrix()")
    _m = np.empty((len(_rows), _width), dtype=object)
    for i, r in enumerate(_rows):
        for j, x in enumerate(r):
            _m[i, j] = x
    return _m


def rat_matrix(rows=None, shape=None):
    """ same as int_matrix(), but with reduced Fraction entries """
    if rows is None:
        rows = []
    _rows = [[Fraction(x) for x in r] for r in rows]
    if not _rows:
        return np.zeros(shape or (0, 0), dtype=object)
    _m = np.empty((len(_rows), len(_rows[0])), dtype=object)
    for i, r in enumerate(_rows):
        if len(r) != _m.shape[1]:
            raise DimensionMismatch("ragged rows passed to rat_matrix()")
        for j, x in enumerate(r):
            _m[i, j] = x
    return _m


def rat_vector(entries=None):
    """ exact rational vector; Fraction keeps denominators positive and reduced """
    if entries is None:
        entries = []
    _v = np.empty(len(entries), dtype=object)
    for i, x in enumerate(entries):
        _v[i] = Fraction(x)
    return _v


def identity(n):
    _m = np.zeros((n, n), dtype=object)
    for i in range(n):
        _m[i, i] = 1
    return _m


def to_lists(A):
    return [list(r) for r in np.asarray(A, dtype=object)]


def matrix_key(A):
    """ hashable, totally ordered key for a matrix (row-major entry tuple) """
    return tuple(tuple(int(x) for x in r) for r in A)


def mod_one(v):
    """ canonical representative of a rational vector in [0,1)^n """
    return rat_vector([Fraction(x) % 1 for x in v])


def is_integral(v):
    return all(Fraction(x).denominator == 1 for x in np.asarray(v).flat)


def common_denominator(values):
    return reduce(lambda a, b: a * b // math.gcd(a, b),
                  [Fraction(x).denominator for x in values], 1)


def format_rational(x):
    """ reduced "p/q" string; integers are written without a denominator """
    return str(Fraction(x))


def parse_rational(x):
    if isinstance(x, bool):
        raise ValueError("booleans are not rationals")
    return Fraction(x) if not isinstance(x, str) else Fraction(x.strip())


def _shape(A):
    _a = np.asarray(A, dtype=object)
    if _a.ndim != 2:
        if _a.size == 0:
            return np.zeros((0, 0), dtype=object)
        raise DimensionMismatch("expected a 2-d matrix, got %s dimensions" % _a.ndim)
    return _a


#
# conversions between numpy object arrays and sympy domain matrices
#

def _zz(A):
    _a = _shape(A)
    return DomainMatrix([[ZZ(int(x)) for x in r] for r in _a], _a.shape, ZZ)


def _from_zz(M):
    return int_matrix([[int(x) for x in r] for r in M.to_list()], shape=M.shape)


def _qq(x):
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _from_qq(x):
    return Fraction(int(QQ.numer(x)), int(QQ.denom(x)))


def _gf(A, p):
    _fp = GF(p)
    _a = _shape(A)
    return DomainMatrix([[_fp(int(x) % p) for x in r] for r in _a], _a.shape, _fp)


def _field_order(rows):
    """ lcm of the cyclotomic orders present, or None for a rational matrix """
    _orders = [x.order for r in rows for x in r if isinstance(x, Cyclotomic)]
    if not _orders:
        return None
    return reduce(lambda a, b: a * b // math.gcd(a, b), _orders, 1)


def _field_matrix(rows, width=None):
    """
    DomainMatrix over QQ or over the cyclotomic field of the entries, plus
    the function mapping its elements back.
    """
    _rows = [list(r) for r in rows]
    _shape2 = (len(_rows), len(_rows[0]) if _rows else (width or 0))
    order = _field_order(_rows)
    if order is None:
        return DomainMatrix([[_qq(x) for x in r] for r in _rows], _shape2, QQ), _from_qq
    K = cyclotomic_domain(order)
    _dm = DomainMatrix([[to_field_element(as_cyclotomic(x, order), K) for x in r]
                        for r in _rows], _shape2, K)
    return _dm, lambda a: from_field_element(a, order, K)


def _ensure_recursion(depth):
    # the Smith decomposition recurses once per diagonal entry
    if sys.getrecursionlimit() < 2 * depth + 200:
        sys.setrecursionlimit(2 * depth + 200)


def int_determinant(A):
    """ determinant of a square integer matrix """
    _a = _shape(A)
    if _a.shape[0] != _a.shape[1]:
        raise DimensionMismatch("determinant of a non-square matrix")
    if _a.shape[0] == 0:
        return 1
    return int(_zz(_a).det())


def smith_normal_form(A):
    """
    Smith normal form of an integer matrix, normalized to non-negative
    invariant factors with the zero ones last.
    :param A: integer matrix (m x c)
    :return: (U, D, V) with U*A*V = D, D diagonal with d_i | d_i+1 and U, V
    unimodular
    """
    _a = _shape(A)
    m, c = _a.shape
    if m == 0 or c == 0:
        return identity(m), np.zeros((m, c), dtype=object), identity(c)
    _ensure_recursion(min(m, c))
    _d, _s, _t = smith_normal_decomp(_zz(_a))
    U, D, V = _from_zz(_s), _from_zz(_d), _from_zz(_t)
    k = min(m, c)
    for i in range(k):
        if D[i, i] < 0:
            D[i, i] = -D[i, i]
            U[i, :] = -U[i, :]
    _order = [i for i in range(k) if D[i, i]] + [i for i in range(k) if not D[i, i]]
    if _order != list(range(k)):
        _rows = _order + list(range(k, m))
        _cols = _order + list(range(k, c))
        U, D, V = U[_rows, :], D[_rows, :][:, _cols], V[:, _cols]
    return U, D, V


def _diagonal(D):
    return [D[i, i] for i in range(min(D.shape))]


def invariant_factors(A):
    """ nonzero diagonal of the SNF; the zero ones count free factors of the cokernel """
    _a = _shape(A)
    if 0 in _a.shape:
        return []
    _ensure_recursion(min(_a.shape))
    return [abs(int(x)) for x in _invariant_factors(_zz(_a)) if x]


def hermite_normal_form(A):
    """
    Row-style Hermite normal form: the rows returned form the echelon basis
    of the lattice spanned by the rows of A (sympy's column HNF of A^T,
    transposed back).
    """
    _a = _shape(A)
    if _a.shape[0] == 0 or not any(x != 0 for x in _a.flat):
        return int_matrix([], shape=(0, _a.shape[1]))
    return _from_zz(_column_hnf(_zz(_a).transpose()).transpose())


def lattice_basis(vectors, n):
    """
    HNF basis of the lattice spanned by rational vectors.
    :param vectors: iterable of length-n rational vectors
    :param n: ambient dimension
    :return: rational n x n matrix whose COLUMNS form the basis (the lattice
    must have full rank)
    """
    _vectors = [[Fraction(x) for x in v] for v in vectors]
    _den = common_denominator([x for v in _vectors for x in v])
    _h = hermite_normal_form(int_matrix([[int(x * _den) for x in v] for v in _vectors],
                                        shape=(0, n)))
    if _h.shape[0] != n:
        raise DimensionMismatch("generators do not span a full rank lattice")
    return rat_matrix([[Fraction(_h[j, i], _den) for j in range(n)] for i in range(n)])


def _independent_rows(A, p=_KERNEL_PRIME):
    """ indices of rows of A that are linearly independent modulo p """
    _, _pivots = _gf(A, p).transpose().rref()
    return list(_pivots)


def integer_kernel(A):
    """
    Basis (as columns) of {x in Z^c : A x = 0} together with an integer left
    inverse. Rationally independent rows are picked modulo a large prime so
    the Smith form is taken of a matrix with at most c rows; the kernel is
    verified exactly and the full matrix is used when verification fails.
    :return: (K, P) with A K = 0, P K = I and every integral kernel vector
    x equal to K (P x)
    """
    _a = _shape(A)
    c = _a.shape[1]
    _sel = _independent_rows(_a) if _a.shape[0] and c else []
    _k = _kernel_columns(_a[_sel, :]) if _sel else identity(c)
    if len(_sel) < _a.shape[0] and _k.shape[1] and any(x != 0 for x in _a.dot(_k).flat):
        logger.warning("modular row selection lost rank; recomputing the "
                       "kernel from all %s rows", _a.shape[0])
        _k = _kernel_columns(_a)
    return _k, _left_inverse(_k)


def _kernel_columns(A):
    _, D, V = smith_normal_form(A)
    r = sum(1 for x in _diagonal(D) if x)
    return V[:, r:]


def _left_inverse(K):
    """ integer P with P K = I for a saturated lattice basis K (columns) """
    c, k = K.shape
    if k == 0:
        return np.zeros((0, c), dtype=object)
    # U K V = [I; 0], hence V [I 0] U K = I
    U, D, V = smith_normal_form(K)
    if any(x != 1 for x in _diagonal(D)):
        raise ValueError("kernel basis is not saturated")
    return V.dot(U[:k, :])


def solve_congruence(A, b, d=1):
    """
    Decide solvability of A x + b in (1/d) Z^m with x rational.
    Diagonalize with the Smith normal form U A V = D: the rows of full rank
    can always be matched by a rational x, the remaining rows need
    (U b)_i in (1/d) Z.
    :param A: integer matrix (m x n)
    :param b: rational vector of length m
    :param d: positive integer
    :return: rational witness x (length n) or None
    """
    _a = _shape(A)
    _b = rat_vector(b)
    if _a.shape[0] != len(_b):
        raise DimensionMismatch("solve_congruence(): A has %s rows but b has %s entries"
                                % (_a.shape[0], len(_b)))
    if d < 1:
        raise ValueError("invalid d= argument; expected a positive integer")
    m, n = _a.shape
    if m == 0:
        return rat_vector([0] * n)
    U, D, V = smith_normal_form(_a)
    _ub = U.dot(_b)
    _diag = _diagonal(D)
    for i in range(m):
        if (i >= n or not _diag[i]) and (Fraction(_ub[i]) * d).denominator != 1:
            return None
    _y = rat_vector([-Fraction(_ub[i]) / _diag[i] if i < m and _diag[i] else 0
                     for i in range(n)])
    return V.dot(_y)


def solve_integer_system(A, b):
    """
    Integer solution of A x = b (b integral), or None.
    """
    _a = _shape(A)
    _b = np.asarray([int(x) for x in b], dtype=object)
    if _a.shape[0] != len(_b):
        raise DimensionMismatch("solve_integer_system(): shape mismatch")
    m, n = _a.shape
    if m == 0:
        return np.zeros(n, dtype=object)
    U, D, V = smith_normal_form(_a)
    _ub = U.dot(_b)
    _diag = _diagonal(D)
    _y = np.zeros(n, dtype=object)
    for i in range(m):
        _di = _diag[i] if i < n else 0
        if _di == 0:
            if _ub[i]:
                return None
        elif _ub[i] % _di:
            return None
        else:
            _y[i] = _ub[i] // _di
    return V.dot(_y)


def solve_integer_congruence(A, c, N):
    """
    All integer solutions of A y = c (mod N).
    :return: None when unsolvable, otherwise (y0, gens, moduli): every
    solution is y0 + sum t_j * gens[j] with t_j ranging over Z/moduli[j]
    (modulo N Z^n)
    """
    _a = _shape(A)
    m, n = _a.shape
    _c = [int(x) for x in c]
    if len(_c) != m:
        raise DimensionMismatch("solve_integer_congruence(): shape mismatch")
    if N < 1:
        raise ValueError("invalid N= argument; expected a positive modulus")
    U, D, V = smith_normal_form(_a)
    _uc = [int(x) % N for x in U.dot(np.asarray(_c, dtype=object))] if m else []
    _diag = _diagonal(D)
    # substituting y = V z turns the system into d_i z_i = (Uc)_i (mod N)
    if any(_uc[i] for i in range(n, m)):
        return None
    _z = np.zeros(n, dtype=object)
    _vectors, _moduli = [], []
    for i in range(n):
        _di = _diag[i] if i < m else 0
        _ci = _uc[i] if i < m else 0
        g = math.gcd(_di, N)
        if _ci % g:
            return None
        if N // g > 1:
            _z[i] = (_ci // g) * pow((_di // g) % (N // g), -1, N // g) % (N // g)
        if g > 1:
            _vectors.append(np.asarray([(x * (N // g)) % N for x in V[:, i]], dtype=object))
            _moduli.append(g)
    _y0 = np.asarray([int(x) % N for x in V.dot(_z)], dtype=object)
    return _y0, _vectors, _moduli


class FgaGroup(object):
    """
    Finitely generated abelian group Z/d_1 + ... + Z/d_k with d_i | d_i+1
    (0 encodes a free factor), together with the linear map from the ambient
    presentation generators to factor coordinates. Invariant factors equal
    to 1 are dropped.
    """

    def __init__(self, invariant_factors=None, to_coords=None, ambient=None):
        self._factors = [abs(int(x)) for x in (invariant_factors or [])]
        _finite = [x for x in self._factors if x != 0]
        if any(x == 1 for x in self._factors):
            raise ValueError("unit invariant factors must be dropped")
        if any(b % a for a, b in zip(_finite, _finite[1:])) or \
                self._factors != _finite + [0] * (len(self._factors) - len(_finite)):
            raise ValueError("invariant factors %s violate the divisibility chain"
                             % self._factors)
        if ambient is None:
            ambient = len(self._factors)
        if to_coords is None:
            to_coords = identity(len(self._factors)) if ambient == len(self._factors) \
                else np.zeros((len(self._factors), ambient), dtype=object)
        self._to_coords = np.asarray(to_coords, dtype=object).reshape(len(self._factors), ambient)
        self._ambient = ambient

    def __repr__(self):
        return "FgaGroup(%s)" % self.describe()

    def __eq__(self, other):
        return isinstance(other, FgaGroup) and self._factors == other._factors

    __hash__ = None

    @property
    def invariant_factors(self):
        return list(self._factors)

    @property
    def to_coords(self):
        return self._to_coords

    @property
    def ambient(self):
        return self._ambient

    def describe(self):
        if not self._factors:
            return "0"
        return " + ".join("Z" if d == 0 else "Z/%s" % d for d in self._factors)

    def order(self):
        if any(d == 0 for d in self._factors):
            return math.inf
        return reduce(lambda a, b: a * b, self._factors, 1)

    def is_trivial(self):
        return not self._factors

    def reduce(self, x):
        """ canonical factor coordinates: finite factors reduced mod d_i """
        return [int(a) % d if d else int(a) for a, d in zip(x, self._factors)]

    def coordinates(self, ambient_vector):
        """ factor coordinates of an ambient element """
        _x = np.asarray(ambient_vector, dtype=object)
        if _x.shape[0] != self._ambient:
            raise DimensionMismatch("expected %s ambient coordinates, got %s"
                                    % (self._ambient, _x.shape[0]))
        _y = self._to_coords.dot(_x) if self._factors else []
        _out = []
        for a in _y:
            a = Fraction(a)
            if a.denominator != 1:
                raise ValueError("ambient vector is not in the presented subgroup")
            _out.append(int(a))
        return self.reduce(_out)

    def precompose(self, M, ambient=None):
        """ FgaGroup with coordinates x -> to_coords(M x) """
        _m = np.asarray(M, dtype=object)
        return FgaGroup(self._factors, self._to_coords.dot(_m) if self._factors else
                        np.zeros((0, _m.shape[1]), dtype=object),
                        ambient=_m.shape[1] if ambient is None else ambient)


def fga_from_relations(gens, rels):
    """
    Present Z^gens / rowspan(rels) by its invariant factors.
    :param gens: number of generators
    :param rels: integer matrix with gens columns (one relation per row)
    :return: FgaGroup
    """
    _rels = np.asarray(rels, dtype=object)
    if _rels.size == 0:
        _rels = np.zeros((0, gens), dtype=object)
    if _rels.ndim != 2 or _rels.shape[1] != gens:
        raise DimensionMismatch("relation matrix must have %s columns" % gens)
    if gens == 0:
        return FgaGroup([], np.zeros((0, 0), dtype=object), ambient=0)
    if _rels.shape[0] == 0:
        return FgaGroup([0] * gens, identity(gens), ambient=gens)
    _, D, V = smith_normal_form(_rels)
    _diag = [D[i, i] if i < D.shape[0] else 0 for i in range(gens)]
    _keep = [i for i in range(gens) if _diag[i] != 1]
    # coordinates y = V^T x; the zero factors already come last
    _to = int_matrix([[V[k, i] for k in range(gens)] for i in _keep], shape=(0, gens))
    return FgaGroup([_diag[i] for i in _keep], _to, ambient=gens)


def fga_element_order(G, x):
    """
    Order of an element given by factor coordinates.
    :return: least m >= 1 with m x = 0, or math.inf
    """
    _x = G.reduce(x)
    _order = 1
    for a, d in zip(_x, G.invariant_factors):
        if a == 0:
            continue
        if d == 0:
            return math.inf
        _k = d // math.gcd(a, d)
        _order = _order * _k // math.gcd(_order, _k)
    return _order


def fga_contains_zero_image(G, x):
    """ True iff the factor coordinates x represent the identity """
    return all(a == 0 for a in G.reduce(x))


#
# elimination over Q and Q(zeta); entries may be ints, Fractions or
# Cyclotomic numbers, results come back in the same kind
#

def rref(M):
    """
    Reduced row echelon form.
    :return: (R, pivots) with R a list of lists
    """
    _rows = [list(r) for r in M]
    if not _rows:
        return [], []
    _dm, _back = _field_matrix(_rows)
    _r, _pivots = _dm.rref()
    return [[_back(x) for x in r] for r in _r.to_list()], list(_pivots)


def rank(M):
    _rows = [list(r) for r in M]
    if not _rows:
        return 0
    return _field_matrix(_rows)[0].rank()


def column_space(vectors):
    """ echelon basis of the span of the given vectors """
    _r, _pivots = rref([list(v) for v in vectors])
    return [_r[i] for i in range(len(_pivots))]


def solve(A, b):
    """ one solution x of A x = b over the entries' field, or None """
    _rows = [list(r) + [b[i]] for i, r in enumerate(A)]
    if not _rows:
        return []
    c = len(_rows[0]) - 1
    _r, _pivots = rref(_rows)
    if c in _pivots:
        return None
    _zero = _r[0][0] * 0
    _x = [_zero] * c
    for i, p in enumerate(_pivots):
        _x[p] = _r[i][c]
    return _x


def inverse(A):
    """ exact inverse of a square matrix over the entries' field """
    _rows = [list(r) for r in A]
    n = len(_rows)
    if n == 0:
        return np.zeros((0, 0), dtype=object)
    _dm, _back = _field_matrix(_rows, n)
    try:
        _inv = _dm.inv()
    except DMNonInvertibleMatrixError:
        raise ValueError("matrix is singular")
    _out = np.empty((n, n), dtype=object)
    for i, r in enumerate(_inv.to_list()):
        for j, x in enumerate(r):
            _out[i, j] = _back(x)
    return _out


def determinant(A):
    """ exact determinant over the entries' field """
    _rows = [list(r) for r in A]
    if not _rows:
        return Fraction(1)
    _dm, _back = _field_matrix(_rows)
    return _back(_dm.det())


def integer_inverse(A):
    """ inverse of a unimodular integer matrix """
    _inv = inverse(A)
    if not is_integral(_inv):
        raise ValueError("matrix is not unimodular")
    return int_matrix([[int(x) for x in r] for r in _inv])
