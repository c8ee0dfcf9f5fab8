"""Galois action on modular data.

For k coprime to the conductor N of the entries, the automorphism zeta_N -> zeta_N^k
permutes the columns of the normalized character table ``S[X][Y] / S[0][Y]``;
the induced permutation of labels is found by column matching.
"""
import functools
import logging
import math
from collections import namedtuple

import numpy as np

from mdtk.construct import deligne_product
from mdtk.cyclo import ZERO, units
from mdtk.exceptions import (ConsistencyError, DegeneracyError, GaloisError,
                             NotModularError)
from mdtk.modular import (ModularDatum, VerificationReport, dims, fs_exponent,
                          global_dim, memoize, ndim, normalized_t, verify)

logger = logging.getLogger(__name__)

MATCH_TOLERANCE = 1e-8

Orbit = namedtuple('Orbit', ['labels', 'dim'])


class GaloisPermutation:
    """The permutation of simples induced by zeta_N -> zeta_N^k.

    :param k: the exponent of the automorphism.
    :param perm: ``perm[Y]`` is the index of the image of ``Y``.
    :param labels: the labels the permutation acts on.
    """

    def __init__(self, k, perm, labels):
        self.k = k
        self.perm = tuple(perm)
        self.labels = tuple(labels)

    def __call__(self, label):
        return self.labels[self.perm[self.labels.index(label)]]

    def compose(self, other, modulus):
        """``self`` after ``other``."""
        return GaloisPermutation(
            self.k * other.k % modulus,
            [self.perm[y] for y in other.perm],
            self.labels,
        )

    def is_identity(self):
        return all(x == y for x, y in enumerate(self.perm))

    def cycles(self):
        """Nontrivial cycles as tuples of labels."""
        seen = set()
        found = []
        for start in range(len(self.perm)):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.perm[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.perm[nxt]
            if len(cycle) > 1:
                found.append(tuple(self.labels[i] for i in cycle))
        return found

    def __eq__(self, other):
        if not isinstance(other, GaloisPermutation):
            return NotImplemented
        return self.perm == other.perm and self.labels == other.labels

    __hash__ = None

    def __repr__(self):
        return f"<GaloisPermutation k={self.k} {self.cycles() or 'identity'}>"


def entry_conductor(md):
    """lcm of the conductors of the S-entries and the orders of the T-entries."""
    return math.lcm(*(x.conductor for row in md.S for x in row), *(t.order for t in md.T))


def _galois_key(md, k):
    N = entry_conductor(md)
    if math.gcd(k, N) != 1:
        raise GaloisError(f"{k} is not coprime to the entry conductor {N}.")
    return k % N or 1


def working_conductor(md):
    """lcm of 12 FSexp and the entry conductor; indexes the full action."""
    return math.lcm(12 * fs_exponent(md), entry_conductor(md))


@functools.lru_cache(maxsize=None)
def unit_generators(n):
    """A generating set of the unit group mod n, chosen greedily."""
    gens = []
    group = {1 % n}
    for k in units(n):
        if k % n in group:
            continue
        gens.append(k)
        frontier = list(group)
        while frontier:
            a = frontier.pop()
            for g in gens:
                b = a * g % n
                if b not in group:
                    group.add(b)
                    frontier.append(b)
    return tuple(gens)


@memoize
def _ratios(md):
    """Columns of ``S[X][Y] / S[0][Y]``, indexed [Y][X]."""
    r = md.rank
    dimensions, _ = dims(md)
    zero = [md.labels[y] for y, d in enumerate(dimensions) if not d]
    if zero:
        raise NotModularError(f"Objects of dimension zero: {', '.join(zero)}.", witness=zero)
    inverses = [d.inverse() for d in dimensions]
    columns = [[md.S[x][y] * inverses[y] for x in range(r)] for y in range(r)]
    prints = np.array([[complex(v) for v in column] for column in columns])
    return columns, prints


@memoize
def galois_permutation(md, k):
    """The permutation sigma-hat with
    ``sigma(S[X][Y] / S[0][Y]) = S[X][sigma-hat(Y)] / S[0][sigma-hat(Y)]``.

    :raises GaloisError: if k is not coprime to the entry conductor.
    :raises NotModularError: if some column has no image.
    :raises DegeneracyError: if some column has several images.
    """
    k = _galois_key(md, k)
    columns, prints = _ratios(md)
    r = md.rank
    perm = []
    for y in range(r):
        image = [v.galois_apply(k) for v in columns[y]]
        numeric = np.array([complex(v) for v in image])
        close = np.flatnonzero(np.abs(prints - numeric).max(axis=1) < MATCH_TOLERANCE)
        candidates = close.tolist() or range(r)
        matches = [z for z in candidates if all(a == b for a, b in zip(image, columns[z]))]
        if not matches:
            raise NotModularError(
                f"No Galois image for the column of {md.labels[y]} under k = {k}.",
                witness=(md.labels[y], k),
            )
        if len(matches) > 1:
            raise DegeneracyError(
                f"Columns {', '.join(md.labels[z] for z in matches)} all match "
                f"the image of {md.labels[y]} under k = {k}.",
                witness=(md.labels[y], k),
            )
        perm.append(matches[0])
    if len(set(perm)) != r:
        raise NotModularError(f"The Galois image under k = {k} is not a permutation.", witness=(k,))
    return GaloisPermutation(k, perm, md.labels)


@memoize
def galois_action(md):
    """Permutations for every unit mod N, built from generators by composition.

    :rtype: dict
    """
    N = working_conductor(md)
    identity = GaloisPermutation(1, range(md.rank), md.labels)
    base = {g: galois_permutation(md, g) for g in unit_generators(N)}
    action = {1: identity}
    frontier = [1]
    while frontier:
        k = frontier.pop()
        for g, p in base.items():
            kg = k * g % N
            if kg not in action:
                action[kg] = p.compose(action[k], N)
                frontier.append(kg)
    logger.debug("Galois action of %s: %d permutations", md.name, len(action))
    return action


def _orbit(md, members):
    members = sorted(members)
    dimensions, _ = dims(md)
    total = sum((dimensions[x] * dimensions[x] for x in members), ZERO)
    return Orbit(tuple(md.labels[x] for x in members), total)


def orbit(md, label):
    """The Galois orbit of a simple, with the sum of its squared dimensions.

    :rtype: Orbit
    """
    x = md.index(label)
    return _orbit(md, {p.perm[x] for p in galois_action(md).values()})


def orbit_t(md, label):
    """The sub-orbit under squared automorphisms, with its dimension.

    :rtype: Orbit
    """
    x = md.index(label)
    N = working_conductor(md)
    action = galois_action(md)
    squares = {k * k % N for k in units(N)}
    return _orbit(md, {action[k].perm[x] for k in squares})


def orbits(md):
    """The partition of the labels into Galois orbits.

    :rtype: list of Orbit
    """
    seen = set()
    found = []
    for label in md.labels:
        if label in seen:
            continue
        o = orbit(md, label)
        seen.update(o.labels)
        found.append(o)
    return found


def conjugate_category(md, k, check=True):
    """The conjugate datum with every entry moved by zeta_N -> zeta_N^k.

    :param check: verify the result when ``md`` itself verifies.
    :raises GaloisError: if k is not coprime to the entry conductor.
    :raises ConsistencyError: if conjugation broke a verified datum.
    """
    k = _galois_key(md, k)
    S = [[x.galois_apply(k) for x in row] for row in md.S]
    T = [t.galois(k) for t in md.T]
    result = ModularDatum(md.labels, S, T, name=f"sigma{k}({md.name})")
    if check and verify(md).passed and not verify(result).passed:
        failed = ', '.join(c.name for c in verify(result).failures())
        raise ConsistencyError(f"Conjugating {md.name} by {k} broke: {failed}.")
    return result


def bar_category(md):
    """The product of one conjugate per coset of the stabilizer of dim(C).

    :raises ConsistencyError: if the product's dimension is not Ndim.
    """
    D = global_dim(md)
    N = working_conductor(md)
    representatives = []
    images = []
    for k in units(N):
        image = D.galois_apply(k)
        if not any(image == seen for seen in images):
            images.append(image)
            representatives.append(k)
    if len(representatives) == 1:
        return md
    factors = [conjugate_category(md, k) for k in representatives]
    result = functools.reduce(deligne_product, factors)
    result.name = f"bar({md.name})"
    if global_dim(result) != ndim(md):
        raise ConsistencyError(f"dim of {result.name} is {global_dim(result)}, not {ndim(md)}.")
    if fs_exponent(result) != fs_exponent(md):
        raise ConsistencyError(f"FSexp of {result.name} differs from FSexp of {md.name}.")
    return result


def verify_galois_identities(md):
    """Check the Galois-action identities for every unit mod N.

    :rtype: VerificationReport
    """
    report = VerificationReport(md.name)
    names = ('homomorphism', 'dimension-identity', 'square-galois-twist', 'suborbit-containment')
    N = working_conductor(md)
    try:
        action = galois_action(md)
    except NotModularError as err:
        report.add('galois-permutation', str(err))
        for name in names:
            report.add(name, "no Galois action")
        return report
    report.add('galois-permutation')

    gens = unit_generators(N)
    witness = None
    for g in gens:
        for h in gens:
            direct = galois_permutation(md, g * h % N)
            if direct != action[g].compose(action[h], N):
                witness = f"perm({g}*{h}) != perm({g}) o perm({h})"
    report.add('homomorphism', witness)

    dimensions, D = dims(md)
    squares = [d * d for d in dimensions]
    witness = None
    for k, p in sorted(action.items()):
        conjugate_dim = D.galois_apply(k)
        for x in range(md.rank):
            if squares[p.perm[x]] * conjugate_dim != D * squares[x].galois_apply(k):
                witness = f"dim({md.labels[p.perm[x]]})^2 fails for {md.labels[x]} under k = {k}"
                break
        if witness:
            break
    report.add('dimension-identity', witness)

    try:
        t = normalized_t(md)
    except NotModularError as err:
        report.add('square-galois-twist', str(err))
    else:
        witness = None
        for k, p in sorted(action.items()):
            bad = [x for x in range(md.rank) if t[p.perm[x]] != t[x] ** (k * k)]
            if bad:
                witness = f"t of {md.labels[p.perm[bad[0]]]} != sigma^2(t of {md.labels[bad[0]]}) for k = {k}"
                break
        report.add('square-galois-twist', witness)

    outside = [
        label for label in md.labels
        if not set(orbit_t(md, label).labels) <= set(orbit(md, label).labels)
    ]
    report.add('suborbit-containment', f"sub-orbit escapes for {', '.join(outside)}" if outside else None)
    return report
