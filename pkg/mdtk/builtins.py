"""The builtin catalog: every example family, plus the named products that
attain the FSexp bound."""
from mdtk.catalog import Catalog
from mdtk.construct import (cyclic_metric_group, deligne_product,
                            diagonal_metric_group, double_abelian, fibonacci,
                            ising, pointed, so5_level9, trivial)
from mdtk.helpers import freeze_func

catalog = Catalog('builtins')

POINTED_FORMS = [
    (2, 1), (3, 1), (3, 2), (4, 1), (5, 1), (5, 2), (7, 1), (7, 3),
    (8, 1), (9, 1), (16, 1), (25, 1), (27, 1),
]


@freeze_func
def pointed_cyclic(n, a=1):
    return pointed(cyclic_metric_group(n, a))


@catalog.register('trivial')
def trivial_entry():
    """The rank-one datum of Vec."""
    return trivial()


@catalog.register('pointed/C<n>/<a>')
def pointed_entries():
    """Pointed data on C_n with q(g) = zeta^(a g^2)."""
    return {(n, a): pointed_cyclic(n, a) for n, a in POINTED_FORMS}


@catalog.register('double/<group>')
def double_entries():
    """Doubles of C2 and C3."""
    return {'C2': double_abelian([2]), 'C3': double_abelian([3])}


@catalog.register('ising/<j>/<eps>')
def ising_entries():
    """The sixteen Ising data."""
    return {
        (j, '+' if eps == 1 else '-'): ising(j, eps)
        for j in range(1, 16, 2)
        for eps in (1, -1)
    }


@catalog.register('fibonacci/<j>')
def fibonacci_entries():
    """The four Fibonacci data, two of them pseudounitary."""
    return {j: fibonacci(j) for j in range(1, 5)}


@catalog.register('so5level9/<j>')
def so5_entries():
    """Rank-6 nonpseudounitary data with FSexp = dim = Ndim = 9."""
    return {j: so5_level9(j) for j in (1, 2, 4, 5, 7, 8)}


@catalog.register('product/<pair>')
def product_entries():
    """Products attaining the bound with an Ising factor."""
    base = ising(1, 1)
    klein = pointed(diagonal_metric_group([(2, 1), (2, 1)]))
    return {
        'ising⊠ising': deligne_product(base, ising(3, -1)),
        'ising⊠C2': deligne_product(base, pointed_cyclic(2)),
        'ising⊠C4': deligne_product(base, pointed_cyclic(4)),
        'ising⊠C2xC2': deligne_product(base, klein),
    }
