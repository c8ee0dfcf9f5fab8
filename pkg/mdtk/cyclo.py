"""Exact arithmetic in cyclotomic fields.

An element of Q(zeta_n) is stored in the power basis ``1, z, ..., z^(phi(n)-1)``
as a tuple of integer numerators over one positive common denominator, kept in
lowest terms. Operands at different conductors are lifted to the lcm conductor;
results are never reduced to a smaller conductor unless asked to.
"""
import logging
import math
import operator
from collections import namedtuple
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np
from mpmath.ctx_iv import MPIntervalContext
from sympy import (Matrix, Poly, QQ, Rational, Symbol, cyclotomic_poly, divisors,
                   primefactors, totient)

from mdtk.exceptions import (DivisionByZero, GaloisError, NotRealError,
                             NumericalError, ValidationError)

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 53
MAX_PRECISION = 4096
GUARD_BITS = 32

ComplexInterval = namedtuple('ComplexInterval', ['real', 'imag'])

_x = Symbol('x')


@lru_cache(maxsize=None)
def euler_phi(n):
    return int(totient(n))


@lru_cache(maxsize=None)
def units(n):
    """The residues 1 <= k <= n coprime to n."""
    return tuple(k for k in range(1, n + 1) if math.gcd(k, n) == 1)


@lru_cache(maxsize=None)
def _phi_coeffs(n):
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    poly = Poly(cyclotomic_poly(n, _x), _x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _high_powers(n):
    """x^e mod Phi_n for phi(n) <= e < n, as integer rows."""
    d = euler_phi(n)
    low = _phi_coeffs(n)[:d]
    row = [-c for c in low]
    table = []
    for _ in range(d, n):
        table.append(tuple(row))
        top = row[-1]
        row = [0] + row[:-1]
        if top:
            row = [r - top * c for r, c in zip(row, low)]
    return tuple(table)


def _reduce(n, acc):
    """Fold a length-n vector of exponent coefficients into the power basis."""
    d = euler_phi(n)
    out = list(acc[:d])
    if n > d:
        table = _high_powers(n)
        for e in range(d, n):
            c = acc[e]
            if c:
                for i, r in enumerate(table[e - d]):
                    if r:
                        out[i] += c * r
    return out


def _new(n, num, den=1):
    obj = object.__new__(Cyc)
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = math.gcd(den, *num)
    if g != 1:
        num = [c // g for c in num]
        den //= g
    obj._n = n
    obj._num = tuple(num)
    obj._den = den
    obj._hash = None
    obj._reduced = None
    return obj


def _coerce(value):
    if isinstance(value, Cyc):
        return value
    if isinstance(value, RootOfUnity):
        return value.to_cyc()
    if isinstance(value, (int, Fraction)):
        value = Fraction(value)
        return _new(1, (value.numerator,), value.denominator)
    return None


def _common(a, b):
    if a._n == b._n:
        return a, b
    m = math.lcm(a._n, b._n)
    return a.lift(m), b.lift(m)


class Cyc:
    """An exact element of the cyclotomic field Q(zeta_n).

    :param n: the conductor the element is presented at.
    :type n: int

    :param coeffs: phi(n) rational coefficients of the power basis
                   ``1, zeta_n, ..., zeta_n^(phi(n)-1)``. Omit for zero.
    :type coeffs: list of int or fractions.Fraction
    """
    __slots__ = ('_n', '_num', '_den', '_hash', '_reduced')

    def __init__(self, n, coeffs=()):
        n = int(n)
        if n < 1:
            raise ValueError("Conductor must be a positive integer.")
        d = euler_phi(n)
        coeffs = [Fraction(c) for c in coeffs] or [Fraction(0)] * d
        if len(coeffs) != d:
            raise ValueError(f"Conductor {n} needs {d} coefficients, got {len(coeffs)}.")
        den = math.lcm(*(c.denominator for c in coeffs))
        num = [c.numerator * (den // c.denominator) for c in coeffs]
        other = _new(n, num, den)
        self._n = other._n
        self._num = other._num
        self._den = other._den
        self._hash = None
        self._reduced = None

    @classmethod
    def from_rational(cls, value):
        return _coerce(Fraction(value))

    @property
    def conductor(self):
        return self._n

    @property
    def coeffs(self):
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self):
        return self._num

    @property
    def denominator(self):
        return self._den

    def terms(self):
        """The nonzero ``(power, coefficient)`` pairs."""
        return [(i, Fraction(c, self._den)) for i, c in enumerate(self._num) if c]

    def is_rational(self):
        return not any(self._num[1:])

    def is_integral(self):
        """Whether this is an algebraic integer (the power basis is integral)."""
        return self._den == 1

    def is_real(self):
        return self.conj() == self

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational.")
        return Fraction(self._num[0], self._den)

    def lift(self, m):
        """The same value presented at a conductor m divisible by ours."""
        n = self._n
        if m == n:
            return self
        if m % n:
            raise ValueError(f"Cannot lift conductor {n} to {m}.")
        step = m // n
        acc = [0] * m
        for i, c in enumerate(self._num):
            acc[i * step] = c
        return _new(m, _reduce(m, acc), self._den)

    def _scale(self, p, q=1):
        return _new(self._n, [c * p for c in self._num], self._den * q)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = _common(self, other)
        if a._den == b._den:
            return _new(a._n, [x + y for x, y in zip(a._num, b._num)], a._den)
        num = [x * b._den + y * a._den for x, y in zip(a._num, b._num)]
        return _new(a._n, num, a._den * b._den)

    __radd__ = __add__

    def __neg__(self):
        return _new(self._n, [-c for c in self._num], self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other._n == 1:
            return self._scale(other._num[0], other._den)
        if self._n == 1:
            return other._scale(self._num[0], self._den)
        a, b = _common(self, other)
        n = a._n
        acc = [0] * n
        right = [(j, y) for j, y in enumerate(b._num) if y]
        for i, x in enumerate(a._num):
            if x:
                for j, y in right:
                    acc[(i + j) % n] += x * y
        return _new(n, _reduce(n, acc), a._den * b._den)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise DivisionByZero(f"Division by zero in Q(zeta_{self._n}).")
        if self.is_rational():
            return _coerce(Fraction(self._den, self._num[0]))
        nonzero = [(i, c) for i, c in enumerate(self._num) if c]
        if len(nonzero) == 1:
            i, c = nonzero[0]
            return root_of_unity(self._n, -i)._scale(self._den, c)
        poly = Poly([Rational(c) for c in reversed(self._num)], _x, domain=QQ)
        modulus = Poly(cyclotomic_poly(self._n, _x), _x, domain=QQ)
        inv = poly.invert(modulus)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        coeffs += [Fraction(0)] * (euler_phi(self._n) - len(coeffs))
        return Cyc(self._n, coeffs)._scale(self._den)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = _coerce(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __bool__(self):
        return any(self._num)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self is other:
            return True
        if self._n == other._n:
            return self._num == other._num and self._den == other._den
        left, right = self.is_rational(), other.is_rational()
        if left or right:
            return left and right and self._num[0] * other._den == other._num[0] * self._den
        a, b = _common(self, other)
        return a._num == b._num and a._den == b._den

    def __hash__(self):
        if self._hash is None:
            red = self.reduce_conductor()
            if red._n == 1:
                self._hash = hash(Fraction(red._num[0], red._den))
            else:
                self._hash = hash((red._n, red._num, red._den))
        return self._hash

    def galois_apply(self, k):
        """Apply the automorphism zeta_n -> zeta_n^k.

        :raises GaloisError: if k is not coprime to the conductor.
        """
        n = self._n
        if math.gcd(k, n) != 1:
            raise GaloisError(f"{k} is not coprime to the conductor {n}.")
        k %= n
        if k == 1 or n <= 2:
            return self
        acc = [0] * n
        for i, c in enumerate(self._num):
            if c:
                acc[i * k % n] += c
        return _new(n, _reduce(n, acc), self._den)

    def conj(self):
        return self.galois_apply(-1)

    def _fixed_by(self, m):
        n = self._n
        return all(
            self.galois_apply(k) == self
            for k in range(1 + m, n, m)
            if math.gcd(k, n) == 1
        )

    def _restrict(self, m):
        n = self._n
        step = n // m
        d = euler_phi(m)
        if set(primefactors(step)) <= set(primefactors(m)):
            return _new(m, [self._num[j * step] for j in range(d)], self._den)
        columns = [root_of_unity(m, j).lift(n).numerators for j in range(d)]
        basis = Matrix([[col[i] for col in columns] for i in range(euler_phi(n))])
        solution, _ = basis.gauss_jordan_solve(Matrix(self._num))
        coeffs = [Fraction(int(s.p), int(s.q) * self._den) for s in solution]
        return Cyc(m, coeffs)

    def reduce_conductor(self):
        """The same value at the smallest conductor containing it."""
        if self._reduced is None:
            if self.is_rational():
                reduced = _new(1, (self._num[0],), self._den)
            else:
                reduced = self
                for m in divisors(self._n)[1:-1]:
                    if m % 4 != 2 and self._fixed_by(m):
                        reduced = self._restrict(m)
                        break
            if reduced._n != self._n:
                reduced._reduced = reduced
            self._reduced = reduced
        return self._reduced

    def __complex__(self):
        weights = np.array([float(c) for c in self._num])
        return complex(weights @ _powers_of_zeta(self._n)) / self._den

    def __repr__(self):
        return f"Cyc({self._n}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self:
            return "0"
        parts = []
        for i, c in self.terms():
            if i == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = _power_name(self._n, i)
            else:
                body = f"{abs(c)}*{_power_name(self._n, i)}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def to_json(self):
        return {
            'n': self._n,
            'c': [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data):
        """Read ``{"n": conductor, "c": [["num", "den"], ...]}``.

        :raises ValidationError: if the document does not fit the schema.
        """
        if not isinstance(data, dict) or set(data) != {'n', 'c'}:
            raise ValidationError(f"Cyclotomic number must have keys 'n' and 'c': {data!r}")
        try:
            n = int(data['n'])
            coeffs = [Fraction(int(num), int(den)) for num, den in data['c']]
        except (TypeError, ValueError, ZeroDivisionError) as err:
            raise ValidationError(f"Malformed cyclotomic number {data!r}: {err}") from err
        if n < 1:
            raise ValidationError(f"Conductor must be positive, got {n}.")
        if len(coeffs) != euler_phi(n):
            raise ValidationError(
                f"Coefficient length {len(coeffs)} does not match phi({n}) = {euler_phi(n)}."
            )
        return cls(n, coeffs)


def _power_name(n, i):
    return f"z{n}" if i == 1 else f"z{n}^{i}"


@lru_cache(maxsize=None)
def _powers_of_zeta(n):
    return np.exp(2j * np.pi * np.arange(euler_phi(n)) / n)


class RootOfUnity:
    """The root of unity ``exp(2 pi i exponent / order)``.

    The pair is normalized so that ``order`` is the exact multiplicative order.
    """
    __slots__ = ('order', 'exponent')

    def __init__(self, order, exponent=1):
        order = int(order)
        if order < 1:
            raise ValueError("Order must be a positive integer.")
        exponent = int(exponent) % order
        g = math.gcd(order, exponent)
        self.order = order // g
        self.exponent = exponent // g

    @classmethod
    def from_cyc(cls, value):
        """:raises ValueError: if value is not a root of unity."""
        value = _coerce(value)
        order = is_root_of_unity(value)
        if order is None:
            raise ValueError(f"{value} is not a root of unity.")
        for k in units(order):
            if root_of_unity(order, k) == value:
                return cls(order, k)
        raise AssertionError("unreachable")

    def to_cyc(self):
        return root_of_unity(self.order, self.exponent)

    def galois(self, k):
        if math.gcd(k, self.order) != 1:
            raise GaloisError(f"{k} is not coprime to the order {self.order}.")
        return RootOfUnity(self.order, self.exponent * k)

    def inverse(self):
        return RootOfUnity(self.order, -self.exponent)

    def roots(self, d):
        """All g with g**d equal to this root."""
        m = self.order
        return [RootOfUnity(d * m, self.exponent + m * j) for j in range(d)]

    def cube_roots(self):
        return self.roots(3)

    def sixth_roots(self):
        return self.roots(6)

    def __mul__(self, other):
        if isinstance(other, RootOfUnity):
            m = math.lcm(self.order, other.order)
            return RootOfUnity(
                m,
                self.exponent * (m // self.order) + other.exponent * (m // other.order),
            )
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.to_cyc() * other

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RootOfUnity):
            return self * other.inverse()
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.to_cyc() / other

    def __neg__(self):
        return RootOfUnity(2 * self.order, 2 * self.exponent + self.order)

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        return RootOfUnity(self.order, self.exponent * e)

    def __eq__(self, other):
        if isinstance(other, RootOfUnity):
            return (self.order, self.exponent) == (other.order, other.exponent)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.to_cyc() == other

    def __hash__(self):
        return hash(self.to_cyc())

    def __complex__(self):
        return complex(np.exp(2j * np.pi * self.exponent / self.order))

    def __repr__(self):
        return f"RootOfUnity({self.order}, {self.exponent})"

    def __str__(self):
        if self.order == 1:
            return "1"
        if self.order == 2:
            return "-1"
        return _power_name(self.order, self.exponent)

    def to_json(self):
        return {'m': self.order, 'k': self.exponent}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or set(data) != {'m', 'k'}:
            raise ValidationError(f"Root of unity must have keys 'm' and 'k': {data!r}")
        try:
            return cls(int(data['m']), int(data['k']))
        except (TypeError, ValueError) as err:
            raise ValidationError(f"Malformed root of unity {data!r}: {err}") from err


ZERO = Cyc.from_rational(0)
ONE = Cyc.from_rational(1)


@lru_cache(maxsize=None)
def _root_of_unity(n, k):
    d = euler_phi(n)
    if k < d:
        num = [0] * d
        num[k] = 1
        return _new(n, num)
    return _new(n, _high_powers(n)[k - d])


def root_of_unity(n, k=1):
    """zeta_n^k at conductor n. Values are shared between calls."""
    if n < 1:
        raise ValueError("Order must be a positive integer.")
    return _root_of_unity(n, k % n)


_OPERATIONS = {
    'add': operator.add,
    'sub': operator.sub,
    'mul': operator.mul,
    'div': operator.truediv,
}


def arith(a, b, op):
    try:
        func = _OPERATIONS[op]
    except KeyError:
        raise ValueError(f"Unknown operation {op!r}.")
    return func(_coerce(a), _coerce(b))


def galois_apply(a, k):
    return _coerce(a).galois_apply(k)


def conj(a):
    return _coerce(a).conj()


def reduce_conductor(a):
    return _coerce(a).reduce_conductor()


def conjugates(a):
    """The distinct Galois conjugates of a, one per coset of its stabilizer."""
    red = reduce_conductor(a)
    found = []
    for k in units(red.conductor):
        image = red.galois_apply(k)
        if not any(image == seen for seen in found):
            found.append(image)
    return found


def degree(a):
    return len(conjugates(a))


def trace_norm(a):
    """:returns: the trace and norm of a down to Q.
    :rtype: tuple(Fraction, Fraction)
    """
    values = conjugates(a)
    trace = reduce(operator.add, values, ZERO)
    norm = reduce(operator.mul, values, ONE)
    return trace.to_fraction(), norm.to_fraction()


def is_real(a):
    a = _coerce(a)
    return a.conj() == a


def m_measure(a):
    """Tr(a^2) / [Q(a):Q] for a totally real a.

    :raises NotRealError: if a is not real.
    """
    a = _coerce(a)
    if not is_real(a):
        raise NotRealError(f"{a} is not real.")
    values = conjugates(a)
    total = reduce(operator.add, (v * v for v in values), ZERO)
    return total.to_fraction() / len(values)


def is_root_of_unity(a):
    """:returns: the multiplicative order of a, or None if a is not a root of unity."""
    a = _coerce(a)
    if not a or not a.is_integral():
        return None
    nonzero = [(i, c) for i, c in enumerate(a.numerators) if c]
    if len(nonzero) == 1 and abs(nonzero[0][1]) == 1:
        i, c = nonzero[0]
        n = a.conductor
        return RootOfUnity(n, i).order if c == 1 else RootOfUnity(2 * n, 2 * i + n).order
    bound = math.lcm(2, a.conductor)
    if a ** bound != 1:
        return None
    for d in divisors(bound):
        if a ** d == 1:
            return d


def real_subfield_degree(n):
    """[Q(zeta_n)^+ : Q], counted as the classes {k, -k} of units mod n."""
    if n < 1:
        raise ValueError("Modulus must be a positive integer.")
    seen = set()
    count = 0
    for k in units(n):
        if k % n not in seen:
            count += 1
            seen.update({k % n, -k % n})
    return count


def square_class_count(n):
    """The number of squares in the unit group mod n."""
    if n < 1:
        raise ValueError("Modulus must be a positive integer.")
    return len({k * k % n for k in units(n)})


@lru_cache(maxsize=None)
def _interval_context(prec):
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


@lru_cache(maxsize=None)
def _unit_circle(n, prec):
    ctx = _interval_context(prec)
    turn = 2 * ctx.pi / n
    angles = [turn * i for i in range(euler_phi(n))]
    return [ctx.cos(t) for t in angles], [ctx.sin(t) for t in angles]


def embed(a, precision=DEFAULT_PRECISION):
    """An interval enclosure of a under zeta_n -> exp(2 pi i / n).

    :param precision: each part is returned with width at most 2^-precision.
    :returns: a pair of mpmath intervals.
    :rtype: ComplexInterval
    """
    a = _coerce(a)
    size = max(abs(c) for c in a.numerators).bit_length() + a.conductor.bit_length()
    work = 64 * math.ceil((precision + size + GUARD_BITS) / 64)
    while work <= 2 * MAX_PRECISION + 64 * math.ceil(size / 64):
        ctx = _interval_context(work)
        cos, sin = _unit_circle(a.conductor, work)
        real = ctx.mpf(0)
        imag = ctx.mpf(0)
        for c, x, y in zip(a.numerators, cos, sin):
            if c:
                real += c * x
                imag += c * y
        den = ctx.mpf(a.denominator)
        real, imag = real / den, imag / den
        tol = ctx.ldexp(1, -precision)
        if (real.delta <= tol) and (imag.delta <= tol):
            return ComplexInterval(real, imag)
        work *= 2
    raise NumericalError(f"Could not embed {a} to {precision} bits.")


def sign(a):
    """The sign of a real element: -1, 0 or 1.

    :raises NotRealError: if a is not real.
    """
    a = _coerce(a)
    if not is_real(a):
        raise NotRealError(f"{a} is not real.")
    if not a:
        return 0
    precision = DEFAULT_PRECISION
    while precision <= MAX_PRECISION:
        real = embed(a, precision).real
        if real > 0:
            return 1
        if real < 0:
            return -1
        precision *= 2
    raise NumericalError(f"Could not certify the sign of {a}.")


def is_totally_positive(a):
    a = _coerce(a)
    if not is_real(a):
        raise NotRealError(f"{a} is not real.")
    if not a:
        return False
    return all(sign(c) == 1 for c in conjugates(a))
