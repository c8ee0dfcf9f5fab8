import math
import pytest

from mdtk.construct import (cyclic_metric_group, double_abelian, fibonacci,
                            ising, pointed, so5_level9)
from mdtk.exceptions import GaloisError
from mdtk.galois import (bar_category, conjugate_category, galois_action,
                         galois_permutation, orbit, orbit_t, orbits,
                         unit_generators, verify_galois_identities,
                         entry_conductor, working_conductor)
from mdtk.modular import fs_exponent, global_dim, ndim, verify

from fixtures.data import ising_datum, fib_datum, c5_datum


def test_working_conductor(ising_datum, fib_datum):
    assert(working_conductor(ising_datum) == 192)
    assert(working_conductor(fib_datum) == 60)


def test_entry_conductor(ising_datum, fib_datum):
    assert(entry_conductor(ising_datum) == 16)
    assert(entry_conductor(fib_datum) == 5)


@pytest.mark.parametrize("k", [3, 9, 15])
def test_keys_coprime_to_entries(ising_datum, k):
    assert(math.gcd(k, working_conductor(ising_datum)) != 1)
    p = galois_permutation(ising_datum, k)
    assert(p == galois_permutation(ising_datum, k + 16))
    assert(verify(conjugate_category(ising_datum, k)).passed)


def test_ising_permutation(ising_datum):
    p = galois_permutation(ising_datum, 3)
    assert(p('1') == 'delta')
    assert(p('delta') == '1')
    assert(p('X') == 'X')
    assert(p.cycles() == [('1', 'delta')])
    assert(galois_permutation(ising_datum, 7).is_identity())


def test_not_coprime(ising_datum):
    with pytest.raises(GaloisError, match="not coprime"):
        galois_permutation(ising_datum, 2)
    with pytest.raises(GaloisError, match="entry conductor 16"):
        conjugate_category(ising_datum, 6)


def test_action_covers_units(ising_datum):
    action = galois_action(ising_datum)
    assert(len(action) == 64)
    for k in (5, 11, 191):
        assert(action[k] == galois_permutation(ising_datum, k))


@pytest.mark.parametrize("n", [12, 60, 192, 100])
def test_unit_generators(n):
    gens = unit_generators(n)
    group = {1}
    frontier = [1]
    while frontier:
        a = frontier.pop()
        for g in gens:
            b = a * g % n
            if b not in group:
                group.add(b)
                frontier.append(b)
    assert(len(group) == len([k for k in range(1, n) if math.gcd(k, n) == 1]))


def test_ising_orbits(ising_datum):
    found = orbits(ising_datum)
    assert([o.labels for o in found] == [('1', 'delta'), ('X',)])
    assert([o.dim for o in found] == [2, 2])
    assert(orbit_t(ising_datum, '1').labels == ('1',))
    assert(orbit_t(ising_datum, '1').dim == 1)
    assert(orbit(ising_datum, 'delta').labels == ('1', 'delta'))


def test_pointed_orbits(c5_datum):
    found = orbits(c5_datum)
    assert(sorted(len(o.labels) for o in found) == [1, 4])
    assert(orbit_t(c5_datum, c5_datum.labels[1]).labels == (c5_datum.labels[1], c5_datum.labels[4]))


def test_conjugate_is_another_ising(ising_datum):
    conjugate = conjugate_category(ising_datum, 3)
    assert(conjugate == ising(3, 1))
    assert(verify(conjugate).passed)
    assert(fs_exponent(conjugate) == 16)


def test_bar_of_rational_dimension_is_itself(ising_datum):
    assert(bar_category(ising_datum) is ising_datum)


def test_bar_of_fibonacci(fib_datum):
    bar = bar_category(fib_datum)
    assert(bar.rank == 4)
    assert(global_dim(bar) == ndim(fib_datum))
    assert(fs_exponent(bar) == 5)
    assert(verify(bar).passed)


@pytest.mark.parametrize("md", [
    ising(1, 1),
    ising(5, -1),
    fibonacci(2),
    so5_level9(1),
    pointed(cyclic_metric_group(7)),
    pointed(cyclic_metric_group(8)),
    double_abelian([2]),
], ids=lambda md: md.name)
def test_galois_identities(md):
    report = verify_galois_identities(md)
    assert(report.passed), [c for c in report.failures()]
    assert({c.name for c in report} == {
        'galois-permutation', 'homomorphism', 'dimension-identity',
        'square-galois-twist', 'suborbit-containment',
    })
