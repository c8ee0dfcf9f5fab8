import pytest

from pathlib import Path

from mdtk.catalog import Catalog
from mdtk.construct import (cyclic_metric_group, fibonacci, ising, pointed,
                            so5_level9)

FILE_DIR = Path(__file__).absolute().parent / 'files'


@pytest.fixture
def catalog():
    return Catalog('test')


@pytest.fixture
def ising_datum():
    return ising(1, 1)


@pytest.fixture
def fib_datum():
    return fibonacci(1)


@pytest.fixture
def so5_datum():
    return so5_level9(1)


@pytest.fixture
def c5_datum():
    return pointed(cyclic_metric_group(5))


@pytest.fixture
def ising_json():
    return FILE_DIR / 'ising_hand.json'
