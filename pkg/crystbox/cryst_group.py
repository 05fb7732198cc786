#!/usr/bin/env python3
"""
Euclidean crystallographic groups given by a finite point group G of
integer matrices acting on Z^n and a vector system u: G -> Q^n / Z^n. The
group element (L(g), u_g) acts on R^n by v -> L(g) v + u_g.
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import logging

from collections import deque, namedtuple
from fractions import Fraction
from numbers import Integral

import numpy as np

from sympy import divisors

from crystbox.exact_linalg import (
    int_matrix, rat_vector, identity, matrix_key, mod_one,
    is_integral, int_determinant, lattice_basis, inverse, integer_inverse, solve_congruence,
    fga_from_relations, format_rational, parse_rational, DimensionMismatch
)
from crystbox.finite_matrix_group import (
    generate_closure, NotFinite, _DEFAULT_CLOSURE_LIMIT
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Violation = namedtuple("Violation", ["kind", "elements", "detail"])
ValidationReport = namedtuple("ValidationReport", ["valid", "violations"])
TorsionWitness = namedtuple("TorsionWitness",
                            ["element", "x", "lattice_shift", "order", "fixed_point"])
TorsionReport = namedtuple("TorsionReport", ["is_torsion_free", "witnesses"])
MinimalRealization = namedtuple("MinimalRealization", ["d", "w", "group"])
TranslationReduction = namedtuple("TranslationReduction",
                                  ["group", "translation_quotient", "basis"])


class InvalidGeneratorIndex(IndexError):
    pass


def _vector_key(v):
    return tuple(Fraction(x) for x in v)


class CrystGroup(object):
    """
    A crystallographic group with lattice Z^n, point group G and a vector
    system stored with every coordinate in [0, 1).
    """

    def __init__(self, group=None, vector_system=None, translations=None):
        """
        :param group: FiniteMatrixGroup of linear parts
        :param vector_system: one rational vector per group element
        :param translations: translation of each input generator (defaults to
        the vector system at the generator's element)
        """
        if group is None or vector_system is None:
            raise IndexError("invalid group= or vector_system= argument provided")
        if group.n == 0:
            raise ValueError("rank 0 crystallographic groups are not supported")
        if len(vector_system) != group.order:
            raise DimensionMismatch("vector system has %s entries for a group of order %s"
                                    % (len(vector_system), group.order))
        self._group = group
        self._u = []
        for v in vector_system:
            if len(v) != group.n:
                raise DimensionMismatch("translation of length %s on a rank %s lattice"
                                        % (len(v), group.n))
            self._u.append(mod_one(v))
        if translations is None:
            translations = [self._u[i] for i in group.generators]
        self._translations = [rat_vector(t) for t in translations]

    @classmethod
    def from_generators(cls, n, generators, limit=_DEFAULT_CLOSURE_LIMIT):
        """
        Build the group generated by affine maps (L, t). The vector system is
        accumulated along the canonical generator word of each element, so an
        inconsistent generator set still yields an object that validate()
        then rejects.
        """
        if n is None or n < 1:
            raise ValueError("invalid rank n=%s; expected a positive integer" % n)
        _lin = [np.asarray(L, dtype=object) for L, _ in generators]
        _trans = [rat_vector(t) for _, t in generators]
        for t in _trans:
            if len(t) != n:
                raise DimensionMismatch("translation of length %s on a rank %s lattice"
                                        % (len(t), n))
        G = generate_closure(n, _lin, limit=limit)
        _u = []
        for word in G.generator_words:
            _x, _v = 0, rat_vector([0] * n)
            for s in word:
                _v = _v + G.matrix(_x).dot(_trans[s])
                _x = G.mult[_x][G.generators[s]]
            _u.append(_v)
        return cls(G, _u, _trans)

    def __repr__(self):
        return "CrystGroup(n=%s, |G|=%s)" % (self.n, self.order)

    def __eq__(self, other):
        if not isinstance(other, CrystGroup) or other.n != self.n \
                or other.order != self.order:
            return False
        return all(matrix_key(a) == matrix_key(b) for a, b in
                   zip(self._group.elements, other.group.elements)) and \
            all(_vector_key(a) == _vector_key(b) for a, b in zip(self._u, other.vector_system))

    __hash__ = None

    @property
    def n(self):
        return self._group.n

    @property
    def group(self):
        return self._group

    @property
    def order(self):
        return self._group.order

    @property
    def vector_system(self):
        return self._u

    @property
    def generators(self):
        """ (L, t) pairs of the input generators """
        return [(self._group.matrix(i), t) for i, t in
                zip(self._group.generators, self._translations)]

    def linear(self, g):
        return self._group.matrix(g)

    def translation(self, g):
        return self._u[g]

    def cocycle(self, g, h):
        """ epsilon(g, h) = u_g + L(g) u_h - u_gh, integral for a valid group """
        return self._u[g] + self.linear(g).dot(self._u[h]) - self._u[self._group.mult[g][h]]


def validate(C):
    """
    Check the defining identities of a crystallographic group.
    :param C: CrystGroup
    :return: ValidationReport listing every violated identity
    """
    G = C.group
    _violations = []
    if not is_integral(C.translation(0)):
        _violations.append(Violation("identity", (0,), "u at the identity is %s"
                                     % [format_rational(x) for x in C.translation(0)]))
    if len({matrix_key(m) for m in G.elements}) != G.order:
        _violations.append(Violation("faithfulness", (), "repeated linear parts"))
    for s, (L, t) in enumerate(C.generators):
        if G.generators[s] == 0 and not is_integral(t):
            _violations.append(Violation(
                "faithfulness", (s,),
                "generator %s is a translation by %s outside the lattice; "
                "reduce the translations first" % (s, [format_rational(x) for x in t])))
    for x in range(G.order):
        for s, (_, t) in enumerate(C.generators):
            _y = G.mult[x][G.generators[s]]
            if not is_integral(C.translation(x) + C.linear(x).dot(t) - C.translation(_y)):
                _violations.append(Violation("generator", (x, s),
                                             "word extension by generator %s from "
                                             "element %s is inconsistent" % (s, x)))
    for g in range(G.order):
        for h in range(G.order):
            if not is_integral(C.cocycle(g, h)):
                _violations.append(Violation(
                    "cocycle", (g, h),
                    "u_g + L(g) u_h - u_gh = %s is not integral"
                    % [format_rational(x) for x in C.cocycle(g, h)]))
    if _violations:
        logger.debug("validation found %s violations", len(_violations))
    return ValidationReport(valid=not _violations, violations=_violations)


def translate_conjugate(C, w):
    """
    Conjugate by the translation v -> v + w: u'_g = u_g + (L(g) - I) w.
    """
    _w = rat_vector(w)
    if len(_w) != C.n:
        raise DimensionMismatch("shift vector of length %s on a rank %s lattice"
                                % (len(_w), C.n))
    _id = identity(C.n)
    _u = [C.translation(g) + (C.linear(g) - _id).dot(_w) for g in range(C.order)]
    _t = [t + (L - _id).dot(_w) for L, t in C.generators]
    return CrystGroup(C.group, _u, _t)


def change_lattice_basis(C, U):
    """
    Rewrite C in the lattice basis given by the unimodular matrix U:
    L'(g) = U L(g) U^-1 and u'_g = U u_g.
    """
    _u = int_matrix(np.asarray(U, dtype=object).tolist())
    if abs(int_determinant(_u)) != 1:
        raise ValueError("basis change must be unimodular")
    _ui = integer_inverse(_u)
    _gens = [(_u.dot(L).dot(_ui), _u.dot(t)) for L, t in C.generators]
    return CrystGroup.from_generators(C.n, _gens)


def vector_system_of_word(C, word):
    """
    Compose the affine generators named by word (left to right).
    :return: (element index, translation mod Z^n)
    """
    _gens = C.generators
    _x, _v = 0, rat_vector([0] * C.n)
    for s in word:
        if not isinstance(s, Integral) or s < 0 or s >= len(_gens):
            raise InvalidGeneratorIndex("generator index %s out of range 0..%s"
                                        % (s, len(_gens) - 1))
        _v = _v + C.linear(_x).dot(_gens[s][1])
        _x = C.group.mult[_x][C.group.generators[s]]
    return _x, mod_one(_v)


def eigenvalue_one_filter(C):
    """ g -> (det(L(g) - I) == 0) for every g != 1 """
    _id = identity(C.n)
    return {g: int_determinant(C.linear(g) - _id) == 0 for g in range(1, C.order)}


def _affine_power_orbit(L, t, m):
    """ gamma(0), ..., gamma^m(0) for gamma: v -> L v + t of order m """
    _orbit = []
    _v = rat_vector([0] * len(t))
    for _ in range(m):
        _v = L.dot(_v) + t
        _orbit.append(_v)
    if any(x != 0 for x in _v):
        raise RuntimeError("lift does not return to the origin after %s steps" % m)
    return _orbit


def torsion_status(C):
    """
    Decide for every g != 1 whether (L(g) - I) x + u_g is integral for some
    rational x, i.e. whether some lift of g has a fixed point on R^n.
    :param C: CrystGroup
    :return: TorsionReport
    """
    _id = identity(C.n)
    _witnesses = []
    for g in range(1, C.order):
        _a = C.linear(g) - _id
        _x = solve_congruence(_a, C.translation(g), 1)
        if _x is None:
            continue
        _lam = _a.dot(_x) + C.translation(g)
        if not is_integral(_lam):
            raise RuntimeError("congruence witness for element %s does not "
                               "re-substitute" % g)
        _shift = C.translation(g) - _lam
        _m = C.group.element_order(g)
        _orbit = _affine_power_orbit(C.linear(g), _shift, _m)
        _bary = sum(_orbit[1:], _orbit[0]) / _m
        if any(a != b for a, b in zip(C.linear(g).dot(_bary) + _shift, _bary)):
            raise RuntimeError("orbit barycenter is not fixed by the lift of %s" % g)
        _witnesses.append(TorsionWitness(element=g, x=_x,
                                         lattice_shift=int_matrix([_lam]).reshape(C.n),
                                         order=_m, fixed_point=_bary))
    logger.debug("torsion analysis: %s of %s non-identity elements have fixed points",
                 len(_witnesses), C.order - 1)
    return TorsionReport(is_torsion_free=not _witnesses, witnesses=_witnesses)


def minimal_denominator(C):
    """
    Least d such that a translation-conjugate vector system lies in (1/d) Z^n.
    Candidates are the divisors of |G|; each is decided by one stacked
    congruence over all g != 1.
    :param C: CrystGroup (valid)
    :return: MinimalRealization(d, w, conjugated group)
    """
    _id = identity(C.n)
    if C.order == 1:
        return MinimalRealization(1, rat_vector([0] * C.n), C)
    _a = np.vstack([C.linear(g) - _id for g in range(1, C.order)])
    _b = [x for g in range(1, C.order) for x in C.translation(g)]
    for d in divisors(C.order):
        _w = solve_congruence(_a, _b, int(d))
        if _w is not None:
            logger.debug("minimal denominator %s found for a group of order %s", d, C.order)
            return MinimalRealization(int(d), _w, translate_conjugate(C, _w))
    raise RuntimeError("no denominator dividing |G| = %s realizes the vector system; "
                       "is the group valid?" % C.order)


def _affine_closure(n, generators, limit):
    """ the finite group of affine torus maps (L, t mod 1) generated by the input """
    _gens = [(int_matrix(np.asarray(L, dtype=object).tolist()), mod_one(t))
             for L, t in generators]
    _start = (identity(n), rat_vector([0] * n))
    _seen = {(matrix_key(_start[0]), _vector_key(_start[1])): _start}
    _queue = deque([_start])
    while _queue:
        L, t = _queue.popleft()
        for M, s in _gens:
            _new = (L.dot(M), mod_one(t + L.dot(s)))
            _key = (matrix_key(_new[0]), _vector_key(_new[1]))
            if _key not in _seen:
                _seen[_key] = _new
                _queue.append(_new)
                if len(_seen) > limit:
                    raise NotFinite("affine closure exceeded %s elements" % limit)
    return list(_seen.values())


def reduce_translations(n, action, limit=_DEFAULT_CLOSURE_LIMIT):
    """
    Remove pure translations from a finite action on the torus R^n / Z^n.
    The lattice is enlarged to Lambda = Z^n + (translations with identity
    linear part) and coordinates are rescaled by its HNF basis B.
    :param n: rank
    :param action: sequence of affine generators (L, t)
    :return: TranslationReduction(group, translation_quotient Lambda/Z^n, basis B)
    """
    if n is None or n < 1:
        raise ValueError("invalid rank n=%s; expected a positive integer" % n)
    _elements = _affine_closure(n, action, limit)
    _id = matrix_key(identity(n))
    _translations = [t for L, t in _elements if matrix_key(L) == _id]
    _units = [[int(i == j) for j in range(n)] for i in range(n)]
    _b = lattice_basis(_units + [list(t) for t in _translations], n)
    _binv = inverse(_b)
    _gens = [(_binv.dot(int_matrix(np.asarray(L, dtype=object).tolist())).dot(_b),
              _binv.dot(rat_vector(t)))
             for L, t in action]
    _gens = [(int_matrix([[int(x) for x in r] for r in L]), t) for L, t in _gens]
    _quotient = fga_from_relations(n, int_matrix([[int(x) for x in r] for r in _binv.T]))
    logger.debug("translation reduction: %s pure translations, quotient %s",
                 len(_translations), _quotient.describe())
    return TranslationReduction(group=CrystGroup.from_generators(n, _gens, limit=limit),
                                translation_quotient=_quotient, basis=_b)


def to_canonical_json(C):
    """ {"rank", "generators": [{"linear", "translation"}]} with "p/q" strings """
    return {
        "rank": C.n,
        "generators": [{"linear": [[int(x) for x in row] for row in L],
                        "translation": [format_rational(x) for x in mod_one(t)]}
                       for L, t in C.generators]
    }


def from_canonical_json(data, limit=_DEFAULT_CLOSURE_LIMIT):
    """
    Parse the canonical JSON form.
    :raises ValueError: on missing keys or malformed entries
    """
    if not isinstance(data, dict):
        raise ValueError("expected a JSON object with 'rank' and 'generators'")
    for _key in ("rank", "generators"):
        if _key not in data:
            raise ValueError("missing key %r in crystallographic group input" % _key)
    n = data["rank"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("'rank' must be a positive integer, got %r" % (n,))
    _gens = []
    for i, entry in enumerate(data["generators"]):
        try:
            L = entry["linear"]
            t = [parse_rational(x) for x in entry["translation"]]
        except (KeyError, TypeError, ZeroDivisionError) as e:
            raise ValueError("malformed generator %s: %s" % (i, e))
        if len(L) != n or any(len(r) != n for r in L):
            raise ValueError("generator %s: linear part is not %sx%s" % (i, n, n))
        if any(isinstance(x, bool) or not isinstance(x, int) for r in L for x in r):
            raise ValueError("generator %s: linear part must hold integers" % i)
        if len(t) != n:
            raise ValueError("generator %s: translation has %s entries, expected %s"
                             % (i, len(t), n))
        _gens.append((int_matrix(L), t))
    return CrystGroup.from_generators(n, _gens, limit=limit)
