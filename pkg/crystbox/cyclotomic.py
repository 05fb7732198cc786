#!/usr/bin/env python3
"""
Exact arithmetic in cyclotomic fields Q(zeta_n). An element is stored by its
coordinates in the power basis 1, zeta, ..., zeta^(phi(n)-1), i.e. as a
rational polynomial reduced modulo the n-th cyclotomic polynomial. Elements
of different orders are promoted to the lcm of the orders on the fly.
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import cmath
import math
import logging

from fractions import Fraction
from functools import lru_cache

import numpy as np

from sympy import QQ, Add, Rational, cos, pi, cyclotomic_poly, totient
from sympy.polys.polyclasses import ANP

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _power_table(order):
    """
    Reductions of zeta^k (0 <= k < order) in the power basis, as tuples of
    ints of length phi(order).
    """
    _phi = int(totient(order))
    # monic, coefficients from the leading term down
    _poly = [int(c) for c in cyclotomic_poly(order, polys=True).all_coeffs()]
    _tail = list(reversed(_poly[1:]))  # a_0 .. a_{phi-1}
    _table = []
    _v = [0] * _phi
    _v[0] = 1
    for _ in range(order):
        _table.append(tuple(_v))
        # multiply by x and fold x^phi = -(a_0 + ... + a_{phi-1} x^{phi-1})
        _top = _v[-1]
        _v = [0] + _v[:-1]
        if _top:
            _v = [a - _top * b for a, b in zip(_v, _tail)]
    return _table


def _lcm(a, b):
    return a * b // math.gcd(a, b)


class Cyclotomic(object):
    """
    An element of the cyclotomic field of a given order.
    """
    __slots__ = ("_order", "_coeffs")

    def __init__(self, order=1, coeffs=None):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        _phi = len(_power_table(order)[0])
        if coeffs is None:
            coeffs = [0] * _phi
        if len(coeffs) != _phi:
            raise ValueError("expected %s power-basis coordinates for order %s, got %s"
                             % (_phi, order, len(coeffs)))
        self._order = order
        self._coeffs = tuple(Fraction(c) for c in coeffs)

    @classmethod
    def from_exponents(cls, order, terms):
        """
        Build sum c_k zeta^k from an iterable of (k, c) pairs; exponents are
        taken modulo the order.
        """
        _table = _power_table(order)
        _acc = [Fraction(0)] * len(_table[0])
        for k, c in terms:
            if not c:
                continue
            for i, t in enumerate(_table[k % order]):
                if t:
                    _acc[i] += c * t
        return cls(order, _acc)

    @classmethod
    def rational(cls, q, order=1):
        _c = [Fraction(0)] * len(_power_table(order)[0])
        _c[0] = Fraction(q)
        return cls(order, _c)

    @property
    def order(self):
        return self._order

    @property
    def coeffs(self):
        return self._coeffs

    def to_order(self, order):
        """ the same number written in Q(zeta_order); order must be a multiple """
        if order == self._order:
            return self
        if order % self._order:
            raise ValueError("cannot embed order %s into order %s" % (self._order, order))
        _step = order // self._order
        return Cyclotomic.from_exponents(order, ((k * _step, c) for k, c in
                                                 enumerate(self._coeffs)))

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            _order = _lcm(self._order, other._order)
            return self.to_order(_order), other.to_order(_order)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(other, self._order)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a._order, [x + y for x, y in zip(a._coeffs, b._coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self._order, [-x for x in self._coeffs])

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a._order, [x - y for x, y in zip(a._coeffs, b._coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self._order, [x * other for x in self._coeffs])
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        _conv = {}
        for i, x in enumerate(a._coeffs):
            if not x:
                continue
            for j, y in enumerate(b._coeffs):
                if y:
                    _conv[i + j] = _conv.get(i + j, 0) + x * y
        return Cyclotomic.from_exponents(a._order, _conv.items())

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return Cyclotomic.rational(1 / self._coeffs[0], self._order)
        K = cyclotomic_domain(self._order)
        return from_field_element(K.quo(K.one, to_field_element(self, K)), self._order, K)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self._order, [x / other for x in self._coeffs])
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        _result = Cyclotomic.rational(1, self._order)
        _base = self
        while k:
            if k & 1:
                _result = _result * _base
            _base = _base * _base
            k >>= 1
        return _result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self._coeffs[0] == other
        if isinstance(other, Cyclotomic):
            a, b = self._coerce(other)
            return a._coeffs == b._coeffs
        return NotImplemented

    def __ne__(self, other):
        _eq = self.__eq__(other)
        return _eq if _eq is NotImplemented else not _eq

    __hash__ = None

    def is_zero(self):
        return not any(self._coeffs)

    def is_rational(self):
        return not any(self._coeffs[1:])

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("%s is not rational" % self)
        return self._coeffs[0]

    def conjugate(self):
        """ complex conjugation zeta -> zeta^-1 """
        return Cyclotomic.from_exponents(self._order, ((-k, c) for k, c in
                                                       enumerate(self._coeffs)))

    def is_real(self):
        return self == self.conjugate()

    def __complex__(self):
        return complex(sum(float(c) * cmath.exp(2j * math.pi * k / self._order)
                           for k, c in enumerate(self._coeffs) if c))

    def __float__(self):
        return complex(self).real

    def sign(self):
        """ sign of a nonzero real element, decided by sympy on sum c_k cos(2 pi k / n) """
        if not self.is_real():
            raise ValueError("sign of a non-real number")
        if self.is_rational():
            q = self._coeffs[0]
            return (q > 0) - (q < 0)
        _expr = Add(*[Rational(c.numerator, c.denominator) * cos(2 * pi * k / self._order)
                      for k, c in enumerate(self._coeffs) if c])
        if _expr.is_positive:
            return 1
        if _expr.is_negative:
            return -1
        raise ArithmeticError("could not decide the sign of %s" % self)

    def __repr__(self):
        return "Cyclotomic(%s)" % self

    def __str__(self):
        _terms = []
        for k, c in enumerate(self._coeffs):
            if not c:
                continue
            if k == 0:
                _terms.append(str(c))
                continue
            _z = "E(%s)" % self._order if k == 1 else "E(%s)^%s" % (self._order, k)
            if c == 1:
                _terms.append(_z)
            elif c == -1:
                _terms.append("-" + _z)
            else:
                _terms.append("%s*%s" % (c, _z))
        if not _terms:
            return "0"
        return " + ".join(_terms).replace("+ -", "- ")


def zeta(order, k=1):
    """ zeta_order^k """
    return Cyclotomic.from_exponents(order, [(k, 1)])


def as_cyclotomic(x, order=1):
    if isinstance(x, Cyclotomic):
        return x.to_order(_lcm(order, x.order))
    return Cyclotomic.rational(x, order)


@lru_cache(maxsize=None)
def cyclotomic_domain(order):
    """
    sympy domain holding Q(zeta_order) with the power basis used here: QQ
    when phi(order) = 1, otherwise QQ.cyclotomic_field(order)
    """
    if int(totient(order)) == 1:
        return QQ
    return QQ.cyclotomic_field(order, ss=True)


def to_field_element(x, K):
    """ x (a Cyclotomic of the domain's order) as an element of K """
    if K == QQ:
        q = x.to_rational()
        return QQ(q.numerator, q.denominator)
    return ANP([QQ(c.numerator, c.denominator) for c in reversed(x.coeffs)], K.mod, QQ)


def from_field_element(a, order, K):
    """ inverse of to_field_element() """
    if K == QQ:
        return Cyclotomic.rational(Fraction(int(QQ.numer(a)), int(QQ.denom(a))), order)
    _phi = len(_power_table(order)[0])
    _rep = list(reversed(a.to_list()))
    _rep += [QQ.zero] * (_phi - len(_rep))
    return Cyclotomic(order, [Fraction(int(QQ.numer(c)), int(QQ.denom(c))) for c in _rep])


def conjugate(x):
    return x.conjugate() if isinstance(x, Cyclotomic) else x


def cyclotomic_matrix(M, order):
    """ numpy object array of Cyclotomic entries of the given order """
    _m = np.asarray(M, dtype=object)
    _out = np.empty(_m.shape, dtype=object)
    for idx, x in np.ndenumerate(_m):
        _out[idx] = x.to_order(order) if isinstance(x, Cyclotomic) \
            else Cyclotomic.rational(x, order)
    return _out


def conjugate_matrix(M):
    _m = np.asarray(M, dtype=object)
    _out = np.empty(_m.shape, dtype=object)
    for idx, x in np.ndenumerate(_m):
        _out[idx] = conjugate(x)
    return _out


def to_complex_array(M):
    """ float rendering for display only """
    _m = np.asarray(M, dtype=object)
    _out = np.zeros(_m.shape, dtype=complex)
    for idx, x in np.ndenumerate(_m):
        _out[idx] = complex(x)
    return _out
