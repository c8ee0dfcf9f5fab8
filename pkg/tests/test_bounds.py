import numpy as np
import pytest

from fractions import Fraction

from mdtk.bounds import (BoundVerdict, ExtremalClass, bound_check,
                         bound_check_product, bound_check_vec,
                         double_invertibles_check, extremal_classify,
                         fusion_isomorphic, galois_pseudounitary,
                         integrality_checks, key_object, lemma_orbit_bound,
                         lemma_sweep, siegel_check)
from mdtk.construct import (CocycleSpec, cyclic_metric_group, deligne_product,
                            double_abelian, fibonacci, ising, orthogonal_sum,
                            pointed)
from mdtk.cyclo import root_of_unity
from mdtk.exceptions import NotTotallyPositiveError
from mdtk.modular import fpdim_pseudounitary, normalized_t, verlinde_fusion

from fixtures.data import ising_datum, fib_datum, so5_datum

SQRT2 = root_of_unity(8) + root_of_unity(8, -1)
KLEIN = pointed(orthogonal_sum(cyclic_metric_group(2), cyclic_metric_group(2)))


def test_ising_verdict(ising_datum):
    verdict = bound_check(ising_datum)
    assert(verdict == BoundVerdict(16, 4, 2, True, True, 4, ExtremalClass.ISING_X_POINTED_1))
    assert(str(verdict) == "16 ≤ 4·4, extremal tier 4·Ndim")
    assert(verdict.to_json()['extremal_class'] == 'ising-x-pointed(1)')


@pytest.mark.parametrize("md,fsexp,ndim,tier,cls", [
    (fibonacci(1), 5, 5, 1, ExtremalClass.FIBONACCI),
    (fibonacci(2), 5, 5, 1, ExtremalClass.FIBONACCI),
    (fibonacci(3), 5, 5, 1, ExtremalClass.FIBONACCI),
    (pointed(cyclic_metric_group(5)), 5, 5, 1, ExtremalClass.POINTED_CYCLIC),
    (pointed(cyclic_metric_group(9, 2)), 9, 9, 1, ExtremalClass.POINTED_CYCLIC),
    (pointed(cyclic_metric_group(2)), 4, 2, 2, ExtremalClass.POINTED_CYCLIC),
    (pointed(cyclic_metric_group(4)), 8, 4, 2, ExtremalClass.POINTED_CYCLIC),
    (KLEIN, 4, 4, 1, ExtremalClass.POINTED_OTHER),
    (deligne_product(ising(1, 1), pointed(cyclic_metric_group(2))), 16, 8, 2, ExtremalClass.ISING_X_POINTED_2),
    (deligne_product(ising(1, 1), pointed(cyclic_metric_group(4))), 16, 16, 1, ExtremalClass.ISING_X_POINTED_4),
    (deligne_product(ising(1, 1), KLEIN), 16, 16, 1, ExtremalClass.ISING_X_POINTED_4),
    (deligne_product(ising(1, 1), ising(3, -1)), 16, 16, 1, ExtremalClass.ISING_X_ISING),
], ids=lambda v: getattr(v, 'name', None))
def test_extremal_verdicts(md, fsexp, ndim, tier, cls):
    verdict = bound_check(md)
    assert(verdict.fsexp == fsexp)
    assert(verdict.ndim == ndim)
    assert(verdict.bound_holds)
    assert(verdict.extremal)
    assert(verdict.tier == tier)
    assert(verdict.extremal_class == cls)


def test_so5_is_extremal_but_unclassified(so5_datum):
    verdict = bound_check(so5_datum)
    assert(verdict.tier == 1)
    assert(verdict.extremal_class == ExtremalClass.UNCLASSIFIED)
    assert(str(verdict) == "9 ≤ 9, extremal tier Ndim")


def test_double_is_not_extremal():
    verdict = bound_check(double_abelian([2]))
    assert(verdict.bound_holds)
    assert(not verdict.extremal)
    assert(verdict.extremal_class is None)
    assert(str(verdict) == "2 ≤ 4·4")


def test_vacuous_bound():
    verdict = bound_check(pointed(cyclic_metric_group(6)))
    assert(verdict.prime is None)
    assert(verdict.bound_holds)
    assert(str(verdict) == "FSexp 12 is not a prime power, bound holds vacuously")


def test_product_verdict_matches_product(ising_datum):
    c2 = pointed(cyclic_metric_group(2))
    assert(bound_check_product(ising_datum, c2) == bound_check(deligne_product(ising_datum, c2)))
    c3 = pointed(cyclic_metric_group(3))
    verdict = bound_check_product(ising_datum, c3)
    assert(verdict.prime is None)


@pytest.mark.parametrize("orders,twists,fsexp,limit,extremal,cls", [
    ([3], [1], 9, 9, True, ExtremalClass.CYCLIC_GENERATOR),
    ([5], [2], 25, 25, True, ExtremalClass.CYCLIC_GENERATOR),
    ([3], [0], 3, 9, False, None),
    ([2, 2], [1, 1], 4, 16, False, None),
])
def test_vec_g_omega_bound(orders, twists, fsexp, limit, extremal, cls):
    verdict = bound_check_vec(CocycleSpec(orders, twists=twists))
    assert(verdict.fsexp == fsexp)
    assert(verdict.ndim == limit)
    assert(verdict.bound_holds)
    assert(verdict.extremal == extremal)
    assert(verdict.extremal_class == cls)


def test_ising_lemma_lines(ising_datum):
    unit = lemma_orbit_bound(ising_datum, '1')
    assert((unit.orbit_dim, unit.t_order, unit.square_classes, unit.measure) == (2, 16, 2, 1))
    assert(unit.suborbit_dim == 1)
    assert(unit.holds)
    x = lemma_orbit_bound(ising_datum, 'X')
    assert((x.orbit_dim, x.t_order, x.square_classes, x.measure) == (2, 8, 1, 2))
    assert(x.holds)
    assert(x.note is None)


def test_lemma_skips_irrational_dimension(fib_datum):
    line = lemma_orbit_bound(fib_datum, 'X')
    assert(line.holds is None)
    assert(line.note == "dim(C) is not an integer")


@pytest.mark.parametrize("md", [ising(1, 1), ising(7, -1), pointed(cyclic_metric_group(9)), KLEIN],
                         ids=lambda md: md.name)
def test_lemma_sweep(md):
    report = lemma_sweep(md)
    assert(report.passed), report.failures()
    assert(f'orbit-bound:{md.labels[-1]}' in {c.name for c in report})


def test_key_object(ising_datum, fib_datum):
    assert(key_object(ising_datum) == '1')
    t = normalized_t(fib_datum)
    assert(t[fib_datum.index(key_object(fib_datum))].order % 5 == 0)
    with pytest.raises(ValueError, match="not a prime power"):
        key_object(pointed(cyclic_metric_group(6)))


@pytest.mark.parametrize("value,expected", [
    (1, True),
    (2 + SQRT2, True),
    (Fraction(2), True),
    (1 + root_of_unity(5) + root_of_unity(5, -1) + 1, True),
])
def test_siegel(value, expected):
    assert(siegel_check(value) == expected)


def test_siegel_errors():
    with pytest.raises(NotTotallyPositiveError):
        siegel_check(1 + SQRT2)
    with pytest.raises(NotTotallyPositiveError):
        siegel_check(root_of_unity(3))
    with pytest.raises(ValueError, match="algebraic integer"):
        siegel_check(Fraction(1, 2))


def test_fusion_isomorphic(ising_datum, fib_datum):
    ft = verlinde_fusion(ising_datum)
    assert(fusion_isomorphic(ft, ft))
    assert(not fusion_isomorphic(ft, verlinde_fusion(fib_datum)))
    swapped = ft.N[np.ix_([0, 2, 1], [0, 2, 1], [0, 2, 1])]
    assert(fusion_isomorphic(ft, swapped))
    c3 = verlinde_fusion(pointed(cyclic_metric_group(3)))
    assert(not fusion_isomorphic(ft, c3))


def test_classify_nonpseudounitary(so5_datum):
    assert(not galois_pseudounitary(so5_datum))
    assert(extremal_classify(so5_datum) == ExtremalClass.UNCLASSIFIED)


@pytest.mark.parametrize("j,pseudounitary", [(1, True), (2, False), (3, False), (4, True)])
def test_fibonacci_conjugates_classify(j, pseudounitary):
    md = fibonacci(j)
    assert(fpdim_pseudounitary(md)[1] == pseudounitary)
    assert(galois_pseudounitary(md))
    assert(extremal_classify(md) == ExtremalClass.FIBONACCI)


@pytest.mark.parametrize("md", [ising(1, 1), fibonacci(1), fibonacci(3), pointed(cyclic_metric_group(25))],
                         ids=lambda md: md.name)
def test_integrality(md):
    report = integrality_checks(md)
    assert(report.passed), report.failures()
    assert({c.name for c in report} == {'shared-primes', 'dim-divides', 'pointed-divides', 'nt-range'})


@pytest.mark.parametrize("orders", [[2], [3], [2, 2]])
def test_double_invertibles(orders):
    assert(double_invertibles_check(orders).passed)
