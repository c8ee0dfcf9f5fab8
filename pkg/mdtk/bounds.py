"""Executable forms of the FSexp bounds, the orbit and trace lemmas, and the
classifier for data attaining the bounds."""
import enum
import itertools
import logging
import math
from collections import namedtuple
from fractions import Fraction

import numpy as np
from sympy import factorint, primefactors
from sympy.utilities.iterables import partitions

from mdtk.construct import deligne_product, double_abelian, fsexp_vec_g_omega
from mdtk.cyclo import (ZERO, RootOfUnity, _coerce, conjugates, degree, embed,
                        is_totally_positive, m_measure, real_subfield_degree,
                        square_class_count, trace_norm)
from mdtk.exceptions import (ConsistencyError, NotModularError, NotRealError,
                             NotTotallyPositiveError)
from mdtk.galois import orbit, orbit_t
from mdtk.modular import (PSEUDOUNITARY_TOLERANCE, FusionTensor,
                          VerificationReport, dims, fpdim_pseudounitary,
                          fs_exponent, global_dim, invertibles, ndim,
                          normalized_t, normalized_t_order, verlinde_fusion)

logger = logging.getLogger(__name__)


class ExtremalClass(enum.Enum):
    POINTED_CYCLIC = 'pointed-cyclic'
    FIBONACCI = 'fibonacci'
    ISING_X_ISING = 'ising-x-ising'
    ISING_X_POINTED_1 = 'ising-x-pointed(1)'
    ISING_X_POINTED_2 = 'ising-x-pointed(2)'
    ISING_X_POINTED_4 = 'ising-x-pointed(4)'
    ISING_X_POINTED_8 = 'ising-x-pointed(8)'
    POINTED_OTHER = 'pointed-other'
    CYCLIC_GENERATOR = 'cyclic-generator'
    UNCLASSIFIED = 'unclassified'

    def __str__(self):
        return self.value


_ISING_X_POINTED = {
    1: ExtremalClass.ISING_X_POINTED_1,
    2: ExtremalClass.ISING_X_POINTED_2,
    4: ExtremalClass.ISING_X_POINTED_4,
    8: ExtremalClass.ISING_X_POINTED_8,
}

_TIER_NAMES = {1: "Ndim", 2: "2·Ndim", 4: "4·Ndim"}


class BoundVerdict(namedtuple('BoundVerdict', [
        'fsexp', 'ndim', 'prime', 'bound_holds', 'extremal', 'tier', 'extremal_class'])):
    """The FSexp bound evaluated on one datum.

    ``prime`` is None when FSexp is not a prime power (the bound then holds
    vacuously). ``tier`` is k when FSexp = k Ndim for an admissible k.
    """
    __slots__ = ()

    def __str__(self):
        if self.prime is None:
            return f"FSexp {self.fsexp} is not a prime power, bound holds vacuously"
        relation = "≤" if self.bound_holds else ">"
        limit = f"{self.ndim}" if self.prime != 2 else f"4·{self.ndim}"
        text = f"{self.fsexp} {relation} {limit}"
        if self.extremal:
            text += f", extremal tier {_TIER_NAMES[self.tier]}"
        return text

    def to_json(self):
        data = self._asdict()
        data['extremal_class'] = None if self.extremal_class is None else self.extremal_class.value
        return data


LemmaLine = namedtuple('LemmaLine', [
    'label', 'orbit_dim', 'suborbit_dim', 't_order', 'real_degree',
    'square_classes', 'measure', 'holds', 'note',
])


def _prime_of(n):
    """The prime p with n = p^k, or None."""
    factors = factorint(n)
    if len(factors) != 1:
        return None
    return next(iter(factors))


def _verdict(fs, n, classify):
    p = _prime_of(fs)
    if p is None:
        return BoundVerdict(fs, n, None, True, False, None, None)
    holds = fs <= (n if p != 2 else 4 * n)
    allowed = (1,) if p != 2 else (1, 2, 4)
    tier = fs // n if fs % n == 0 and fs // n in allowed else None
    extremal = tier is not None
    return BoundVerdict(fs, n, p, holds, extremal, tier, classify() if extremal else None)


def bound_check(md):
    """FSexp <= Ndim for odd p and FSexp <= 4 Ndim for p = 2.

    :rtype: BoundVerdict
    """
    verdict = _verdict(fs_exponent(md), ndim(md), lambda: extremal_classify(md))
    logger.debug("bound check of %s: %s", md.name, verdict)
    return verdict


def bound_check_product(a, b):
    """The verdict of a (x) b from FSexp = lcm and dim = dim(a) dim(b).

    The product datum is only built when the verdict is extremal and has
    to be classified.
    """
    fs = math.lcm(fs_exponent(a), fs_exponent(b))
    _, norm = trace_norm(global_dim(a) * global_dim(b))
    return _verdict(fs, int(norm), lambda: extremal_classify(deligne_product(a, b)))


def bound_check_vec(cocycle):
    """FSexp(Vec_G^omega) <= |G|^2, with equality iff G is cyclic and omega
    is a generator.

    :param cocycle: the group and cocycle.
    :type cocycle: CocycleSpec
    """
    fs = fsexp_vec_g_omega(cocycle)
    size = len(cocycle.elements)
    limit = size * size
    extremal = fs == limit
    cyclic = any(cocycle.element_order(g) == size for g in cocycle.elements)
    if extremal:
        cls = ExtremalClass.CYCLIC_GENERATOR if cyclic else ExtremalClass.UNCLASSIFIED
    else:
        cls = None
    return BoundVerdict(fs, limit, _prime_of(fs), fs <= limit, extremal, 1 if extremal else None, cls)


def _integral_dim(md):
    D = global_dim(md)
    if not D.is_rational():
        return None
    value = D.to_fraction()
    return int(value) if value.denominator == 1 else None


def lemma_orbit_bound(md, label):
    """dim(O_X) >= s(m) M(dim X) for integral dim(C), where m is the order of
    the normalized twist of X and s(m) counts the squares of units mod m.

    :raises ConsistencyError: if the inequality fails.
    :rtype: LemmaLine
    """
    x = md.index(label)
    name = md.labels[x]
    if _integral_dim(md) is None:
        return LemmaLine(name, None, None, None, None, None, None, None, "dim(C) is not an integer")
    full = orbit(md, name)
    sub = orbit_t(md, name)
    m = normalized_t(md)[x].order
    dimensions, _ = dims(md)
    try:
        measure = m_measure(dimensions[x])
    except NotRealError:
        return LemmaLine(name, full.dim, sub.dim, m, None, None, None, None, f"dim({name}) is not real")
    real_degree = real_subfield_degree(m)
    squares = square_class_count(m)
    lhs = full.dim.to_fraction()
    holds = lhs >= squares * measure
    line = LemmaLine(name, full.dim, sub.dim, m, real_degree, squares, measure, holds, None)
    if not holds:
        raise ConsistencyError(
            f"Orbit bound fails for {name} in {md.name}: {lhs} < {squares} * {measure}."
        )
    return line


def lemma_sweep(md):
    """The orbit bound for every simple, and Siegel's bound for every dim(X)^2.

    :rtype: VerificationReport
    """
    report = VerificationReport(md.name)
    dimensions, _ = dims(md)
    for label, d in zip(md.labels, dimensions):
        try:
            line = lemma_orbit_bound(md, label)
            report.add(f'orbit-bound:{label}')
        except (ConsistencyError, NotModularError) as err:
            line = None
            report.add(f'orbit-bound:{label}', str(err))
        if line is not None and line.note:
            logger.debug("orbit bound skipped for %s in %s: %s", label, md.name, line.note)
        try:
            ok = siegel_check(d * d)
            report.add(f'siegel:{label}', None if ok else f"Tr(dim({label})^2) below 3/2 degree")
        except (NotTotallyPositiveError, ValueError) as err:
            report.add(f'siegel:{label}', str(err))
    return report


def key_object(md):
    """A simple X with FSexp | ord(t_X).

    :raises ValueError: if FSexp is not a prime power.
    :raises ConsistencyError: if no such simple exists.
    """
    fs = fs_exponent(md)
    if fs > 1 and _prime_of(fs) is None:
        raise ValueError(f"FSexp = {fs} of {md.name} is not a prime power.")
    for label, t in zip(md.labels, normalized_t(md)):
        if t.order % fs == 0:
            return label
    raise ConsistencyError(f"No simple of {md.name} has normalized twist order divisible by {fs}.")


def siegel_check(a):
    """True iff a = 1 or Tr(a) >= 3/2 [Q(a):Q].

    :raises NotTotallyPositiveError: if a is not totally positive.
    :raises ValueError: if a is not an algebraic integer.
    """
    a = _coerce(a)
    try:
        positive = is_totally_positive(a)
    except NotRealError:
        positive = False
    if not positive:
        raise NotTotallyPositiveError(f"{a} is not totally positive.")
    if not a.is_integral():
        raise ValueError(f"{a} is not an algebraic integer.")
    if a == 1:
        return True
    trace, _ = trace_norm(a)
    return trace >= Fraction(3, 2) * degree(a)


def _group_fusion(orders):
    elements = list(itertools.product(*(range(n) for n in orders)))
    position = {g: i for i, g in enumerate(elements)}
    size = len(elements)
    N = np.zeros((size, size, size), dtype=np.int64)
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            N[i, j, position[tuple((a + b) % n for a, b, n in zip(g, h, orders))]] = 1
    return N


_ISING_FUSION = np.zeros((3, 3, 3), dtype=np.int64)
for _x, _y, _z in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2),
                   (1, 1, 0), (1, 2, 2), (2, 1, 2), (2, 2, 0), (2, 2, 1)]:
    _ISING_FUSION[_x, _y, _z] = 1

_FIBONACCI_FUSION = np.array([[[1, 0], [0, 1]], [[0, 1], [1, 1]]], dtype=np.int64)


def _kron_fusion(a, b):
    ra, rb = a.shape[0], b.shape[0]
    return np.einsum('ace,bdf->abcdef', a, b).reshape(ra * rb, ra * rb, ra * rb)


def _signature(N, x):
    return (int(N[x, x, 0]), int(N[x, x, x]), int(N[x].sum()), tuple(sorted(N[x, x].tolist())))


def fusion_isomorphic(a, b):
    """Whether two fusion tensors agree up to a relabeling fixing the unit.

    Backtracking over bijections, pruned by per-object invariants.
    """
    A = a.N if isinstance(a, FusionTensor) else np.asarray(a)
    B = b.N if isinstance(b, FusionTensor) else np.asarray(b)
    r = A.shape[0]
    if B.shape[0] != r:
        return False
    sig_a = [_signature(A, x) for x in range(r)]
    sig_b = [_signature(B, x) for x in range(r)]
    if sorted(sig_a) != sorted(sig_b):
        return False
    image = [None] * r
    used = [False] * r

    def consistent(k):
        x = k
        for y in range(k + 1):
            for z in range(k + 1):
                u, v, w = image[x], image[y], image[z]
                if (A[x, y, z] != B[u, v, w] or A[y, x, z] != B[v, u, w]
                        or A[y, z, x] != B[v, w, u]):
                    return False
        return True

    def extend(k):
        if k == r:
            return True
        for u in range(r):
            if used[u] or sig_a[k] != sig_b[u] or (k == 0) != (u == 0):
                continue
            image[k] = u
            used[u] = True
            if consistent(k) and extend(k + 1):
                return True
            used[u] = False
        image[k] = None
        return False

    return extend(0)


def _element_order(ft, x):
    power, order = x, 1
    while power != 0:
        power = int(np.flatnonzero(ft.N[power, x])[0])
        order += 1
    return order


def _two_groups(k):
    """Cyclic orders of every abelian group of order 2^k."""
    for parts in partitions(k):
        yield [2 ** size for size, count in sorted(parts.items()) for _ in range(count)]


def galois_pseudounitary(md):
    """Whether some Galois conjugate of md is pseudounitary.

    Conjugation keeps the fusion rules, so FPdim(C) is fixed while dim(C)
    runs over its conjugates.
    """
    fpdim_global, pseudounitary = fpdim_pseudounitary(md)
    if pseudounitary:
        return True
    return any(
        abs(float(embed(d).real.mid) - fpdim_global) < PSEUDOUNITARY_TOLERANCE
        for d in conjugates(global_dim(md))
    )


def extremal_classify(md):
    """Match the fusion rules against the families attaining the bound.

    Data with no pseudounitary Galois conjugate are never forced into a family.

    :rtype: ExtremalClass
    """
    ft = verlinde_fusion(md)
    if not galois_pseudounitary(md):
        return ExtremalClass.UNCLASSIFIED
    r = md.rank
    if len(invertibles(ft)) == r:
        if any(_element_order(ft, x) == r for x in range(r)):
            return ExtremalClass.POINTED_CYCLIC
        return ExtremalClass.POINTED_OTHER
    if r == 2 and fusion_isomorphic(ft, _FIBONACCI_FUSION):
        return ExtremalClass.FIBONACCI
    if r == 9 and fusion_isomorphic(ft, _kron_fusion(_ISING_FUSION, _ISING_FUSION)):
        return ExtremalClass.ISING_X_ISING
    if r % 3 == 0 and r // 3 in _ISING_X_POINTED:
        size = r // 3
        for orders in _two_groups(size.bit_length() - 1):
            if fusion_isomorphic(ft, _kron_fusion(_ISING_FUSION, _group_fusion(orders))):
                return _ISING_X_POINTED[size]
    return ExtremalClass.UNCLASSIFIED


def integrality_checks(md):
    """Divisibility facts: Ndim and FSexp have the same prime factors;
    dim(X)^2 | dim(C) for integral pseudounitary data; dim(C_pt) | dim(C)
    for integral data; FSexp | n_t | 12 FSexp.

    :rtype: VerificationReport
    """
    report = VerificationReport(md.name)
    fs, n = fs_exponent(md), ndim(md)
    if primefactors(fs) == primefactors(n):
        report.add('shared-primes')
    else:
        report.add('shared-primes', f"FSexp = {fs} and Ndim = {n} have different prime factors")

    D = _integral_dim(md)
    dimensions, _ = dims(md)
    _, pseudounitary = fpdim_pseudounitary(md)
    witness = None
    if D is not None and pseudounitary:
        for label, d in zip(md.labels, dimensions):
            square = d * d
            if not square.is_rational() or square.to_fraction().denominator != 1 \
                    or D % int(square.to_fraction()):
                witness = f"dim({label})^2 = {square} does not divide {D}"
                break
    report.add('dim-divides', witness)

    witness = None
    if D is not None:
        pointed_dim = sum((dimensions[md.index(g)] ** 2 for g in invertibles(verlinde_fusion(md))),
                          ZERO)
        value = pointed_dim.to_fraction() if pointed_dim.is_rational() else None
        if value is None or value.denominator != 1 or D % int(value):
            witness = f"dim(C_pt) = {pointed_dim} does not divide {D}"
    report.add('pointed-divides', witness)

    try:
        normalized_t_order(md)
        report.add('nt-range')
    except (ConsistencyError, NotModularError) as err:
        report.add('nt-range', str(err))
    return report


def double_invertibles_check(cyclic_orders):
    """Every simple of the double of G is invertible and twists by chi(g).

    :rtype: VerificationReport
    """
    md = double_abelian(cyclic_orders)
    report = VerificationReport(md.name)
    ft = verlinde_fusion(md)
    missing = [label for label in md.labels if label not in invertibles(ft)]
    report.add('all-invertible', f"not invertible: {', '.join(missing)}" if missing else None)
    orders = list(cyclic_orders)
    rank = len(orders)
    elements = itertools.product(*(range(n) for n in orders + orders))
    witness = None
    for label, element in zip(md.labels, elements):
        g, c = element[:rank], element[rank:]
        character = RootOfUnity(1, 0)
        for x, y, n in zip(g, c, orders):
            character = character * RootOfUnity(n, x * y)
        if md.twist(label) != character:
            witness = f"theta({label}) = {md.twist(label)}, chi(g) = {character}"
            break
    report.add('twist-character', witness)
    return report
