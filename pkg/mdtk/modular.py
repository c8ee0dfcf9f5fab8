"""Modular data of a modular fusion category.

``T[X]`` holds the inverse twist of ``X``; formulas written with twists invert
it explicitly. The S-matrix is stored unnormalized, with ``S[0][X] = dim(X)``.
"""
import functools
import logging
import math
import threading
from collections import namedtuple

import numpy as np

from mdtk.cyclo import (ZERO, Cyc, RootOfUnity, MAX_PRECISION,
                        DEFAULT_PRECISION, embed, trace_norm)
from mdtk.exceptions import (ConsistencyError, NotModularError, NumericalError,
                             ValidationError)
from mdtk.validator import validate_datum

logger = logging.getLogger(__name__)

FPDIM_TOLERANCE = 1e-12
FPDIM_MAX_ITERATIONS = 10000
PSEUDOUNITARY_TOLERANCE = 1e-9
NOMINATION_TOLERANCE = 1e-6

Check = namedtuple('Check', ['name', 'passed', 'witness'])

kwd_mark = (object(),)


def memoize(func):
    """Cache a function of a datum on the datum itself.

    The cache is guarded by the datum's lock; the computation itself runs
    outside the lock, so memoized functions may call each other.
    """
    @functools.wraps(func)
    def wrapper(md, *args, **kwargs):
        key = (func.__name__,) + args + kwd_mark + tuple(sorted(kwargs.items()))
        with md._lock:
            if key in md._cache:
                return md._cache[key]
        value = func(md, *args, **kwargs)
        with md._lock:
            return md._cache.setdefault(key, value)
    return wrapper


def _as_cyc(value):
    if isinstance(value, Cyc):
        return value
    if isinstance(value, RootOfUnity):
        return value.to_cyc()
    return Cyc.from_rational(value)


class ModularDatum:
    """The pair (S, T) attached to a (pre)modular category.

    :param labels: names of the simple objects, the unit first.
    :type labels: list of str

    :param S: the unnormalized S-matrix.
    :type S: list of lists of Cyc (ints are accepted)

    :param T: the diagonal of T, ``T[X]`` being the inverse twist of ``X``.
    :type T: list of RootOfUnity

    :param name: a name for reports.
    :param validate: if True, structural validation runs immediately and
                     raises :class:`ValidationError` on malformed data.
    """

    def __init__(self, labels, S, T, name=None, validate=True):
        self.labels = tuple(labels)
        self.S = tuple(tuple(_as_cyc(x) for x in row) for row in S)
        self.T = tuple(T)
        self.name = name
        self._index = {label: i for i, label in enumerate(self.labels)}
        self._cache = {}
        self._lock = threading.Lock()
        if validate:
            validate_datum(self.labels, self.S, self.T)

    @property
    def rank(self):
        return len(self.labels)

    def index(self, label):
        """The position of a label; integers are passed through."""
        if isinstance(label, int) and 0 <= label < self.rank:
            return label
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"Unknown label {label!r} in {self.name or 'datum'}.")

    def twist(self, label):
        return self.T[self.index(label)].inverse()

    def __eq__(self, other):
        if not isinstance(other, ModularDatum):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.T == other.T
            and all(a == b for ra, rb in zip(self.S, other.S) for a, b in zip(ra, rb))
        )

    __hash__ = None

    def __repr__(self):
        return f"<ModularDatum {self.name or '?'} rank {self.rank}>"


class FusionTensor:
    """Fusion coefficients ``N[X][Y][Z]``, the multiplicity of Z in X (x) Y.

    :param labels: labels of the simple objects, the unit first.
    :param N: an r x r x r array of nonnegative integers.
    """

    def __init__(self, labels, N):
        self.labels = tuple(labels)
        self.N = np.asarray(N, dtype=np.int64)
        r = len(self.labels)
        if self.N.shape != (r, r, r):
            raise ValidationError(f"Fusion tensor must have shape {(r, r, r)}, got {self.N.shape}.")
        if (self.N < 0).any():
            raise ValidationError("Fusion coefficients must be nonnegative.")
        self._index = {label: i for i, label in enumerate(self.labels)}
        self.duals = tuple(self._find_dual(x) for x in range(r))

    @property
    def rank(self):
        return len(self.labels)

    def index(self, label):
        if isinstance(label, int) and 0 <= label < self.rank:
            return label
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"Unknown label {label!r}.")

    def _find_dual(self, x):
        candidates = np.flatnonzero(self.N[x, :, 0] == 1)
        if len(candidates) == 1 and self.N[x, :, 0].sum() == 1:
            return int(candidates[0])
        return None

    def dual(self, label):
        return self.duals[self.index(label)]

    def __getitem__(self, key):
        return self.N[key]

    def product(self, x, y):
        """The decomposition of x (x) y as a ``{label: multiplicity}`` dict."""
        row = self.N[self.index(x), self.index(y)]
        return {self.labels[z]: int(m) for z, m in enumerate(row) if m}

    def axiom_failures(self):
        """Descriptions of the violated fusion-ring axioms."""
        failures = []
        r = self.rank
        if not (self.N[0] == np.eye(r, dtype=np.int64)).all():
            failures.append("unit law fails")
        if not (self.N == self.N.transpose(1, 0, 2)).all():
            failures.append("fusion is not commutative")
        missing = [self.labels[x] for x, d in enumerate(self.duals) if d is None]
        if missing:
            failures.append(f"no unique dual for {', '.join(missing)}")
        left = np.einsum('xyw,wzu->xyzu', self.N, self.N)
        right = np.einsum('yzw,xwu->xyzu', self.N, self.N)
        bad = np.argwhere(left != right)
        if len(bad):
            x, y, z, _ = bad[0]
            failures.append(
                f"associativity fails on ({self.labels[x]}, {self.labels[y]}, {self.labels[z]})"
            )
        return failures

    def __eq__(self, other):
        if not isinstance(other, FusionTensor):
            return NotImplemented
        return self.labels == other.labels and (self.N == other.N).all()

    __hash__ = None


class VerificationReport:
    """A complete list of named checks, passing or failing.

    :param subject: what was checked (usually a datum name).
    """

    def __init__(self, subject=None, checks=()):
        self.subject = subject
        self.checks = list(checks)

    def add(self, name, witness=None):
        """Record a check; it passes iff no witness is given."""
        self.checks.append(Check(name, witness is None, witness))

    def extend(self, other):
        self.checks.extend(other.checks)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def failures(self):
        return [check for check in self.checks if not check.passed]

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)

    def __getitem__(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_json(self):
        return {
            'subject': self.subject,
            'passed': self.passed,
            'checks': [check._asdict() for check in self.checks],
        }


def _dot(left, right):
    total = ZERO
    for a, b in zip(left, right):
        if a and b:
            total = total + a * b
    return total


@memoize
def dims(md):
    """:returns: the dimensions ``S[0][X]`` and the global dimension."""
    dimensions = list(md.S[0])
    return dimensions, sum((d * d for d in dimensions), ZERO)


def global_dim(md):
    return dims(md)[1]


@memoize
def _theta_dims(md):
    """dim(X) * theta_X as exact values."""
    dimensions, _ = dims(md)
    return [d * t.inverse() for d, t in zip(dimensions, md.T)]


@memoize
def _unitarity_witness(md):
    """The first (X, Y, value) where S conj(S) differs from dim(C) I."""
    D = global_dim(md)
    r = md.rank
    bar_columns = [[md.S[z][y].conj() for z in range(r)] for y in range(r)]
    for x in range(r):
        for y in range(r):
            value = _dot(md.S[x], bar_columns[y])
            if value != (D if x == y else ZERO):
                return x, y, value
    return None


def _exact_verlinde(md, x, y, z):
    D = global_dim(md)
    S = md.S
    total = ZERO
    for w in range(md.rank):
        if S[x][w] and S[y][w] and S[z][w]:
            total = total + S[x][w] * S[y][w] * S[z][w].conj() / S[0][w]
    return total / D


def _verlinde_error(md, x, y):
    for z in range(md.rank):
        value = _exact_verlinde(md, x, y, z)
        if not value.is_rational() or value.to_fraction().denominator != 1 or value.to_fraction() < 0:
            labels = (md.labels[x], md.labels[y], md.labels[z])
            return NotModularError(
                f"Verlinde coefficient N[{labels[0]}][{labels[1]}][{labels[2]}] = {value} "
                "is not a nonnegative integer.",
                witness=labels,
            )
    return ConsistencyError(f"Fusion coefficients of ({md.labels[x]}, {md.labels[y]}) failed certification.")


@memoize
def verlinde_fusion(md):
    """Recover the fusion coefficients from S by the Verlinde formula.

    Coefficients are nominated in floating point and then certified exactly:
    an integer tensor N with ``sum_Z N[X][Y][Z] S[Z][W] S[0][W] = S[X][W] S[Y][W]``
    for all W is the Verlinde value once ``S conj(S) = dim(C) I``.

    :raises NotModularError: if S is degenerate or a coefficient is not a
                             nonnegative integer (the offending triple is
                             in ``witness``).
    """
    r = md.rank
    S = md.S
    zero_dims = [md.labels[w] for w in range(r) if not S[0][w]]
    if zero_dims:
        raise NotModularError(f"Objects of dimension zero: {', '.join(zero_dims)}.", witness=zero_dims)
    witness = _unitarity_witness(md)
    if witness is not None:
        x, y, value = witness
        raise NotModularError(
            f"S is degenerate: (S conj(S))[{md.labels[x]}][{md.labels[y]}] = {value}.",
            witness=(md.labels[x], md.labels[y]),
        )

    numeric = np.array([[complex(v) for v in row] for row in S])
    nominated = np.einsum(
        'xw,yw,zw->xyz', numeric / numeric[0], numeric, numeric.conj()
    ) / complex(global_dim(md))
    rounded = np.rint(nominated.real).astype(np.int64)
    off = (np.abs(nominated - rounded) > NOMINATION_TOLERANCE) | (rounded < 0)
    if off.any():
        x, y, _ = np.argwhere(off)[0]
        raise _verlinde_error(md, x, y)

    logger.debug("certifying fusion rules of %s", md.name)
    scaled = [[S[z][w] * S[0][w] for w in range(r)] for z in range(r)]
    for x in range(r):
        for y in range(x, r):
            support = [(z, int(m)) for z, m in enumerate(rounded[x, y]) if m]
            for w in range(r):
                lhs = sum((scaled[z][w] * m for z, m in support), ZERO)
                if lhs != S[x][w] * S[y][w]:
                    raise _verlinde_error(md, x, y)
            rounded[y, x] = rounded[x, y]
    return FusionTensor(md.labels, rounded)


@memoize
def charge_conjugation(md):
    """The permutation X -> X* read off from S^2 = dim(C) C.

    :raises NotModularError: if S^2 / dim(C) is not an involutive permutation.
    """
    D = global_dim(md)
    r = md.rank
    columns = [[md.S[z][y] for z in range(r)] for y in range(r)]
    perm = []
    for x in range(r):
        hits = []
        for y in range(r):
            value = _dot(md.S[x], columns[y])
            if value == D:
                hits.append(y)
            elif value:
                raise NotModularError(
                    f"(S^2)[{md.labels[x]}][{md.labels[y]}] = {value} is neither 0 nor dim(C).",
                    witness=(md.labels[x], md.labels[y]),
                )
        if len(hits) != 1:
            raise NotModularError(f"Row {md.labels[x]} of S^2 / dim(C) is not a permutation row.",
                                  witness=(md.labels[x],))
        perm.append(hits[0])
    if any(perm[perm[x]] != x for x in range(r)):
        raise NotModularError("Charge conjugation is not an involution.")
    return tuple(perm)


def gauss_sum(md, m=1, sign=1):
    """The Gauss sum ``sum_X dim(X)^2 theta_X^(sign * m)``."""
    if sign not in (1, -1):
        raise ValueError("Sign must be +1 or -1.")
    dimensions, _ = dims(md)
    total = ZERO
    for d, t in zip(dimensions, md.T):
        total = total + d * d * (t ** (-sign * m))
    return total


def fs_exponent(md):
    """The Frobenius-Schur exponent, the order of T."""
    return math.lcm(*(t.order for t in md.T))


@memoize
def ndim(md):
    """The norm of dim(C) down to Q.

    :raises ConsistencyError: if the norm is not a positive integer.
    """
    _, norm = trace_norm(global_dim(md))
    if norm.denominator != 1 or norm <= 0:
        raise ConsistencyError(f"Norm of dim(C) is {norm}, not a positive integer.")
    return int(norm)


@memoize
def anomaly(md):
    """xi = (tau_1^+)^2 / dim(C) as a root of unity.

    :raises NotModularError: if xi is not a root of unity.
    """
    tau = gauss_sum(md)
    xi = tau * tau / global_dim(md)
    try:
        return RootOfUnity.from_cyc(xi)
    except ValueError:
        raise NotModularError(f"tau^2 / dim(C) = {xi} is not a root of unity.")


def _cube_matches(candidate, tau, D):
    """Whether candidate^3 * sqrt(D) = tau, given candidate^6 = tau^2 / D.

    The two possible values of candidate^3 * sqrt(D) are tau and -tau, at
    distance 2 sqrt(D) apart, so comparing the distance with sqrt(D) decides.
    """
    cube = candidate ** 3
    precision = DEFAULT_PRECISION
    while precision <= MAX_PRECISION:
        size = embed(D, precision).real
        if not size > 0:
            if size < 0:
                raise NotModularError(f"dim(C) = {D} is not positive.")
            precision *= 2
            continue
        root = size.ctx.sqrt(size)
        value = embed(cube.to_cyc(), precision)
        target = embed(tau, precision)
        re = value.real * root - target.real
        im = value.imag * root - target.imag
        distance = re * re + im * im
        if distance < size:
            return True
        if distance > size:
            return False
        precision *= 2
    raise NumericalError(f"Could not certify {candidate} as a cube root.")


@memoize
def gamma(md):
    """The cube root of tau_1^+ / sqrt(dim(C)) of smallest order.

    :raises NotModularError: if no sixth root of the anomaly certifies.
    """
    xi = anomaly(md)
    tau = gauss_sum(md)
    D = global_dim(md)
    valid = [g for g in xi.sixth_roots() if _cube_matches(g, tau, D)]
    if not valid:
        raise NotModularError(f"No cube root of tau / sqrt(dim) among the sixth roots of {xi}.")
    return min(valid, key=lambda g: (g.order, g.exponent))


@memoize
def normalized_t(md):
    """The normalized twists ``t_X = theta_X / gamma``."""
    g = gamma(md)
    return [(t * g).inverse() for t in md.T]


@memoize
def normalized_t_order(md):
    """:returns: gamma and the order n_t of the normalized T-matrix.
    :rtype: tuple(RootOfUnity, int)

    :raises ConsistencyError: if FSexp | n_t | 12 FSexp fails.
    """
    g = gamma(md)
    n_t = math.lcm(*(t.order for t in normalized_t(md)))
    fs = fs_exponent(md)
    if n_t % fs or (12 * fs) % n_t:
        raise ConsistencyError(f"n_t = {n_t} is not between FSexp = {fs} and 12 FSexp.")
    return g, n_t


@memoize
def fpdims(md):
    """Frobenius-Perron dimensions by power iteration on the sum of all
    fusion matrices, which is a positive matrix with the FPdim vector as
    its Perron eigenvector.

    :raises NumericalError: if the iteration does not converge.
    """
    ft = verlinde_fusion(md)
    total = ft.N.sum(axis=0).astype(float)
    v = np.ones(md.rank)
    estimate = 0.0
    for _ in range(FPDIM_MAX_ITERATIONS):
        w = total @ v
        value = w.max()
        v = w / value
        if abs(value - estimate) <= FPDIM_TOLERANCE * value:
            return [float(x) for x in v / v[0]]
        estimate = value
    raise NumericalError(f"Power iteration did not converge for {md.name}.")


@memoize
def fpdim_pseudounitary(md):
    """:returns: FPdim(C) and whether it equals dim(C).
    :rtype: tuple(float, bool)
    """
    fpdim_global = sum(x * x for x in fpdims(md))
    D = float(embed(global_dim(md)).real.mid)
    return fpdim_global, abs(fpdim_global - D) < PSEUDOUNITARY_TOLERANCE


def invertibles(ft):
    """Labels X with X (x) X* = 1."""
    return {
        ft.labels[x]
        for x in range(ft.rank)
        if ft.duals[x] is not None and ft.N[x, ft.duals[x]].sum() == 1
    }


def subcategory_generated(ft, seed):
    """The smallest fusion subcategory containing ``seed``."""
    members = {0} | {ft.index(label) for label in seed}
    while True:
        grown = set(members)
        grown.update(ft.duals[x] for x in members if ft.duals[x] is not None)
        for x in members:
            for y in members:
                grown.update(int(z) for z in np.flatnonzero(ft.N[x, y]))
        if grown == members:
            return {ft.labels[x] for x in members}
        members = grown


def centralizes(md, x, y):
    """The Mueger test ``S[X][Y] = dim(X) dim(Y)``."""
    x, y = md.index(x), md.index(y)
    return md.S[x][y] == md.S[0][x] * md.S[0][y]


def symmetric_center(md):
    return {
        md.labels[x]
        for x in range(md.rank)
        if all(centralizes(md, x, y) for y in range(md.rank))
    }


def _symmetry_witness(md):
    for x in range(md.rank):
        for y in range(x + 1, md.rank):
            if md.S[x][y] != md.S[y][x]:
                return f"S[{md.labels[x]}][{md.labels[y]}] = {md.S[x][y]} but S[{md.labels[y]}][{md.labels[x]}] = {md.S[y][x]}"


def _balancing_witness(md, ft):
    theta_dims = _theta_dims(md)
    for x in range(md.rank):
        for y in range(x, md.rank):
            lhs = md.S[x][y] * (md.T[x] * md.T[y]).inverse()
            rhs = sum((theta_dims[z] * int(m) for z, m in enumerate(ft.N[x, y]) if m), ZERO)
            if lhs != rhs:
                return f"theta_X theta_Y S[X][Y] = {lhs} but the fusion sum is {rhs} at ({md.labels[x]}, {md.labels[y]})"


@memoize
def verify(md):
    """Check the modular axioms.

    Every check is listed in the report; failures carry a witness and are
    never raised.

    :rtype: VerificationReport
    """
    report = VerificationReport(md.name)
    D = global_dim(md)

    report.add('symmetry', _symmetry_witness(md))

    witness = _unitarity_witness(md)
    if witness is not None:
        x, y, value = witness
        witness = f"(S conj(S))[{md.labels[x]}][{md.labels[y]}] = {value}, expected {D if x == y else 0}"
    report.add('unitarity', witness)

    try:
        perm = charge_conjugation(md)
        report.add('charge-conjugation')
    except NotModularError as err:
        perm = None
        report.add('charge-conjugation', str(err))

    try:
        ft = verlinde_fusion(md)
        report.add('verlinde')
    except NotModularError as err:
        ft = None
        report.add('verlinde', str(err))

    if ft is None:
        for name in ('fusion-axioms', 'duality', 'balancing'):
            report.add(name, "no fusion rules")
    else:
        report.add('fusion-axioms', "; ".join(ft.axiom_failures()) or None)
        if perm is None:
            report.add('duality', "no charge conjugation")
        elif tuple(ft.duals) != perm:
            diff = [md.labels[x] for x in range(md.rank) if ft.duals[x] != perm[x]]
            report.add('duality', f"fusion duals disagree with S^2 at {', '.join(diff)}")
        else:
            report.add('duality')
        report.add('balancing', _balancing_witness(md, ft))

    tau_plus = gauss_sum(md, 1, 1)
    tau_minus = gauss_sum(md, 1, -1)
    norm = tau_plus * tau_plus.conj()
    report.add('gauss-norm', None if norm == D else f"|tau_1^+|^2 = {norm}, dim(C) = {D}")
    product = tau_plus * tau_minus
    report.add('gauss-product', None if product == D else f"tau_1^+ tau_1^- = {product}, dim(C) = {D}")

    bad_twists = [md.labels[x] for x, t in enumerate(md.T) if not isinstance(t, RootOfUnity)]
    report.add('twist-orders', f"not roots of unity: {', '.join(bad_twists)}" if bad_twists else None)

    center = symmetric_center(md)
    if center == {md.labels[0]}:
        report.add('symmetric-center')
    else:
        report.add('symmetric-center', f"symmetric center is {sorted(center, key=md.index)}")

    logger.info("verified %s: %s", md.name, "pass" if report.passed else "FAIL")
    return report
