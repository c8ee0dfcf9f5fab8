"""Constructors for the example families of modular data."""
import itertools
import logging
import math

from mdtk.cyclo import RootOfUnity, root_of_unity
from mdtk.exceptions import UnderdeterminedError, ValidationError
from mdtk.modular import ModularDatum

logger = logging.getLogger(__name__)


def _elements(orders):
    return list(itertools.product(*(range(n) for n in orders)))


def _element_order(g, orders):
    return math.lcm(*(n // math.gcd(x, n) for x, n in zip(g, orders)))


class MetricGroup:
    """A finite abelian group ``C_n1 + ... + C_nk`` with a quadratic form.

    :param cyclic_orders: the orders n_i of the cyclic factors.
    :type cyclic_orders: list of int

    :param q: the form as a table of values, or a function of the element
              tuple returning a RootOfUnity.
    :type q: dict or function

    :param check: check that q is even and its associated form is
                  bimultiplicative.
    """

    def __init__(self, cyclic_orders, q, check=True):
        self.cyclic_orders = tuple(int(n) for n in cyclic_orders)
        if any(n < 1 for n in self.cyclic_orders):
            raise ValueError("Cyclic orders must be positive integers.")
        self.elements = _elements(self.cyclic_orders)
        self._position = {g: i for i, g in enumerate(self.elements)}
        if callable(q):
            q = {g: q(g) for g in self.elements}
        self.q = {tuple(g): value for g, value in q.items()}
        missing = [g for g in self.elements if g not in self.q]
        if missing:
            raise ValueError(f"The quadratic form has no value at {missing[0]}.")
        self.modulus = math.lcm(*(self.q[g].order for g in self.elements))
        self._exponent = [self.q[g].exponent * (self.modulus // self.q[g].order) for g in self.elements]
        if check:
            self._check()

    @property
    def order(self):
        return len(self.elements)

    def add(self, g, h):
        return tuple((a + b) % n for a, b, n in zip(g, h, self.cyclic_orders))

    def neg(self, g):
        return tuple(-a % n for a, n in zip(g, self.cyclic_orders))

    def _b_exponent(self, i, j):
        """b(g, h) = q(g + h) / (q(g) q(h)) as an exponent of zeta_modulus."""
        k = self._position[self.add(self.elements[i], self.elements[j])]
        e = self._exponent
        return (e[k] - e[i] - e[j]) % self.modulus

    def b(self, g, h):
        return RootOfUnity(self.modulus, self._b_exponent(self._position[tuple(g)], self._position[tuple(h)]))

    def _check(self):
        for g in self.elements:
            if self.q[self.neg(g)] != self.q[g]:
                raise ValidationError(f"The quadratic form is not even: q(-g) != q(g) at {g}.")
        rank = len(self.cyclic_orders)
        basis = [self._position[tuple(int(i == j) % n for j, n in enumerate(self.cyclic_orders))]
                 for i in range(rank)]
        size = len(self.elements)
        for j in range(size):
            on_basis = [self._b_exponent(i, j) for i in basis]
            for i, g in enumerate(self.elements):
                expected = sum(x * e for x, e in zip(g, on_basis)) % self.modulus
                if self._b_exponent(i, j) != expected:
                    raise ValidationError(
                        f"b is not bimultiplicative at ({g}, {self.elements[j]})."
                    )

    def radical(self):
        """Elements g with b(g, h) = 1 for every h."""
        size = len(self.elements)
        return [
            self.elements[i] for i in range(size)
            if all(self._b_exponent(i, j) == 0 for j in range(size))
        ]

    def is_nondegenerate(self):
        return len(self.radical()) == 1

    def label(self, g):
        if not any(g):
            return "1"
        return "g" + ".".join(str(x) for x in g)


def cyclic_metric_group(n, a=1):
    """C_n with q(g) = zeta_n^(a g^2) for odd n and zeta_(2n)^(a g^2) for even n.

    The form is nondegenerate iff gcd(a, n) = 1.
    """
    m = n if n % 2 else 2 * n
    return MetricGroup([n], lambda g: RootOfUnity(m, a * g[0] * g[0]))


def orthogonal_sum(*groups):
    """The direct sum of metric groups with q the product of the forms."""
    orders = [n for mg in groups for n in mg.cyclic_orders]
    splits = list(itertools.accumulate(len(mg.cyclic_orders) for mg in groups))

    def q(g):
        value = RootOfUnity(1, 0)
        for mg, end in zip(groups, splits):
            start = end - len(mg.cyclic_orders)
            value = value * mg.q[g[start:end]]
        return value

    return MetricGroup(orders, q)


def diagonal_metric_group(factors):
    """The orthogonal sum of cyclic forms, one per (n, a) pair."""
    return orthogonal_sum(*(cyclic_metric_group(n, a) for n, a in factors))


def trivial():
    return ModularDatum(["1"], [[1]], [RootOfUnity(1, 0)], name="trivial")


def pointed(mg, name=None):
    """Pointed modular data: ``S[g][h] = b(g, h)``, ``T[g] = q(g)^-1``.

    The result verifies iff b is nondegenerate.

    :param mg: the metric group.
    :type mg: MetricGroup
    """
    size = mg.order
    L = mg.modulus
    S = [[root_of_unity(L, mg._b_exponent(i, j)) for j in range(size)] for i in range(size)]
    T = [mg.q[g].inverse() for g in mg.elements]
    if name is None:
        name = "pointed(" + "x".join(f"C{n}" for n in mg.cyclic_orders) + ")"
    return ModularDatum([mg.label(g) for g in mg.elements], S, T, name=name)


def ising(j, eps):
    """One of the 16 Ising data, for zeta = zeta_16^j and sign eps.

    :raises ValueError: if j is even or eps is not +1 or -1.
    """
    if j % 2 == 0:
        raise ValueError(f"Ising needs an odd j, got {j}.")
    if eps not in (1, -1):
        raise ValueError(f"Ising needs eps = +1 or -1, got {eps}.")
    j %= 16
    d = root_of_unity(16, 2 * j) + root_of_unity(16, -2 * j)
    e = d * eps
    S = [
        [1, 1, e],
        [1, 1, -e],
        [e, -e, 0],
    ]
    zeta_inv = RootOfUnity(16, -j)
    T = [RootOfUnity(1, 0), RootOfUnity(2, 1), zeta_inv if eps == 1 else -zeta_inv]
    return ModularDatum(["1", "delta", "X"], S, T, name=f"ising({j},{eps:+d})")


def fibonacci(j):
    """Fibonacci data for q = zeta_10^j; it depends on j mod 5 only.

    :raises ValueError: if 5 divides j.
    """
    if j % 5 == 0:
        raise ValueError(f"Fibonacci needs j not divisible by 5, got {j}.")
    j %= 5
    d = 1 + root_of_unity(5, j) + root_of_unity(5, -j)
    S = [
        [1, d],
        [d, -1],
    ]
    T = [RootOfUnity(1, 0), RootOfUnity(5, 2 * j)]
    return ModularDatum(["1", "X"], S, T, name=f"fibonacci({j})")


def so5_level9(j=1):
    """The rank-6 data of so(5) at level 9 for zeta = zeta_9^j.

    :raises ValueError: if 3 divides j.
    """
    if j % 3 == 0:
        raise ValueError(f"so5 level 9 needs j coprime to 9, got {j}.")
    j %= 9

    def z(e):
        return root_of_unity(9, e * j)

    u = z(1) - z(2) - z(5)
    su = u.galois_apply(2)
    ssu = su.galois_apply(2)
    S = [
        [1, -1, 1, u, su, ssu],
        [-1, 1, -1, -su, -ssu, -u],
        [1, -1, 1, ssu, u, su],
        [u, -su, ssu, 1, 1, 1],
        [su, -ssu, u, 1, 1, 1],
        [ssu, -u, su, 1, 1, 1],
    ]
    T = [RootOfUnity(9, e * j) for e in (0, 6, 3, 5, 8, 2)]
    labels = ["1", "Y1", "Y2", "Y3", "Y4", "Y5"]
    return ModularDatum(labels, S, T, name=f"so5level9({j})")


def deligne_product(a, b):
    """The Deligne product: Kronecker product of S, products of T entries.

    A trivial factor is dropped.
    """
    if b.rank == 1:
        return a
    if a.rank == 1:
        return b
    pairs = list(itertools.product(range(a.rank), range(b.rank)))
    labels = [f"{a.labels[x]}⊠{b.labels[y]}" for x, y in pairs]
    S = [[a.S[x][u] * b.S[y][v] for u, v in pairs] for x, y in pairs]
    T = [a.T[x] * b.T[y] for x, y in pairs]
    return ModularDatum(labels, S, T, name=f"{a.name}⊠{b.name}")


def double_abelian(cyclic_orders):
    """The double of an abelian group: pointed data on G + G^ with the
    hyperbolic form q((g, c)) = chi_c(g)."""
    orders = [int(n) for n in cyclic_orders]
    rank = len(orders)

    def q(element):
        g, c = element[:rank], element[rank:]
        value = RootOfUnity(1, 0)
        for x, y, n in zip(g, c, orders):
            value = value * RootOfUnity(n, x * y)
        return value

    mg = MetricGroup(orders + orders, q)
    name = "double(" + "x".join(f"C{n}" for n in orders) + ")"
    return pointed(mg, name=name)


class CocycleSpec:
    """A 3-cocycle class on ``C_n1 + ... + C_nk``.

    :param cyclic_orders: the orders of the cyclic factors.
    :param twists: exponents a_i; the class is the product of the standard
                   cocycles a_i on each factor pulled back along the
                   projections.
    :param restriction_orders: explicit orders of the restrictions of the
                               class to the cyclic subgroup of each element,
                               keyed by element tuple. Overrides ``twists``.
    """

    def __init__(self, cyclic_orders, twists=None, restriction_orders=None):
        self.cyclic_orders = tuple(int(n) for n in cyclic_orders)
        self.elements = _elements(self.cyclic_orders)
        if twists is not None:
            if len(twists) != len(self.cyclic_orders):
                raise ValueError("Need one twist exponent per cyclic factor.")
            twists = tuple(a % n for a, n in zip(twists, self.cyclic_orders))
        self.twists = twists
        if restriction_orders is not None:
            restriction_orders = {tuple(g): int(v) for g, v in restriction_orders.items()}
            for g, v in restriction_orders.items():
                if self.element_order(g) % v:
                    raise ValidationError(f"|omega_g| = {v} does not divide |g| at {g}.")
        self.restriction_orders = restriction_orders

    def element_order(self, g):
        return _element_order(g, self.cyclic_orders)

    def omega_order(self, g):
        """The order of the class restricted to the subgroup generated by g.

        :raises UnderdeterminedError: if neither explicit orders nor twist
                                      exponents determine it.
        """
        g = tuple(g)
        if self.restriction_orders is not None:
            try:
                return self.restriction_orders[g]
            except KeyError:
                raise UnderdeterminedError(f"No restriction order supplied for {g}.")
        if self.twists is None:
            raise UnderdeterminedError(
                "The cocycle is underdetermined: supply twist exponents or explicit |omega_g|."
            )
        m = self.element_order(g)
        b = sum(a * (x * m // n) ** 2 for a, x, n in zip(self.twists, g, self.cyclic_orders))
        return m // math.gcd(b % m, m)


def fsexp_vec_g_omega(cocycle):
    """FSexp(Vec_G^omega) = lcm of |g| |omega_g| over the group."""
    return math.lcm(*(cocycle.element_order(g) * cocycle.omega_order(g) for g in cocycle.elements))
