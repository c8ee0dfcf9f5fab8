import pytest

from mdtk.construct import fibonacci, ising
from mdtk.cyclo import Cyc, RootOfUnity, root_of_unity
from mdtk.exceptions import ValidationError
from mdtk.validator import validate_datum, validate_entry

ONE = Cyc.from_rational(1)
UNIT_T = RootOfUnity(1, 0)


def func_with_name(name, returns):
    def anon():
        return returns
    anon.family = "family"
    anon.name = name
    return anon


@pytest.mark.parametrize(
    "func,error",
    [
        (func_with_name("ising/<j>", ising(1, 1)), "requires parameters"),
        (func_with_name("ising", {"1": ising(1, 1)}), "did not specify parameters"),
        (func_with_name("ising", None), "did not return modular data"),
        (func_with_name("ising/<j>/<eps>", {1: ising(1, 1)}), "single values"),
        (func_with_name("ising/<j>/<eps>", {(1, '+', 'x'): ising(1, 1)}), "incorrect number"),
        (func_with_name("fibonacci/<j>", {1.5: fibonacci(1)}), "right type"),
        (func_with_name("fibonacci/<j>", {1: "not a datum"}), "not modular data"),
    ]
)
def test_validate_entry_errors(func, error):
    with pytest.raises(ValidationError, match=error):
        validate_entry(func)


@pytest.mark.parametrize(
    "func",
    [
        (func_with_name("ising", ising(1, 1))),
        (func_with_name("fibonacci/<j>", {1: fibonacci(1), "2": fibonacci(2)})),
        (func_with_name("ising/<j>/<eps>", {(1, '+'): ising(1, 1)})),
    ]
)
def test_validation_passes(func):
    assert validate_entry(func)


@pytest.mark.parametrize(
    "labels,S,T,error",
    [
        ([], [], [], "at least one"),
        (["1", ""], [[ONE, ONE], [ONE, -ONE]], [UNIT_T, UNIT_T], "nonempty"),
        (["1", "1"], [[ONE, ONE], [ONE, -ONE]], [UNIT_T, UNIT_T], "unique"),
        (["1", "x"], [[ONE, ONE]], [UNIT_T, UNIT_T], "2 x 2"),
        (["1", "x"], [[ONE, 1], [ONE, -ONE]], [UNIT_T, UNIT_T], "cyclotomic"),
        (["1", "x"], [[ONE, ONE], [ONE, -ONE]], [UNIT_T, 1], "roots of unity"),
        (["1", "x"], [[ONE, root_of_unity(3)], [root_of_unity(3), ONE]], [UNIT_T, RootOfUnity(2, 1)], "does not lie in"),
    ]
)
def test_validate_datum_errors(labels, S, T, error):
    with pytest.raises(ValidationError, match=error):
        validate_datum(labels, S, T)


def test_oversized_conductor_warns():
    S = [[ONE, ONE.lift(8)], [ONE, -ONE]]
    with pytest.warns(UserWarning, match="larger than the order"):
        assert(validate_datum(["1", "x"], S, [UNIT_T, RootOfUnity(2, 1)]))
