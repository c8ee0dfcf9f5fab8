import json
import pytest

from mdtk import __version__
from mdtk.cli import main
from mdtk.construct import ising
from mdtk.helpers import load

from fixtures.data import ising_json, FILE_DIR


def test_verify_file(capsys, ising_json):
    assert(main(['verify', str(ising_json)]) == 0)
    out = capsys.readouterr().out
    assert(": PASS" in out)
    assert("[ok] verlinde" in out)


def test_verify_json(capsys):
    assert(main(['--json', 'verify', 'ising/1/+']) == 0)
    data = json.loads(capsys.readouterr().out)
    assert(data['passed'])


def test_malformed_file(capsys):
    assert(main(['verify', str(FILE_DIR / 'bad_unit.json')]) == 1)
    assert("unit normalization" in capsys.readouterr().err)


def test_report(capsys):
    assert(main(['report', 'fibonacci/1']) == 0)
    out = capsys.readouterr().out
    assert("FSexp = 5" in out)
    assert("Ndim = 5" in out)
    assert("pseudounitary: yes" in out)


def test_bound_check(capsys):
    assert(main(['bound-check', 'ising/1/+']) == 0)
    out = capsys.readouterr().out
    assert("16 ≤ 4·4, extremal tier 4·Ndim" in out)
    assert("ising-x-pointed(1)" in out)


def test_fusion(capsys):
    assert(main(['fusion', 'ising/1/+']) == 0)
    assert("X ⊗ X = 1 + delta" in capsys.readouterr().out)


def test_orbits(capsys):
    assert(main(['orbits', 'ising/1/+']) == 0)
    out = capsys.readouterr().out
    assert("orbit {1, delta}: dim 2" in out)
    assert("orbit {X}: dim 2" in out)


def test_construct_and_conjugate(tmp_path, capsys):
    path = tmp_path / 'ising.json'
    assert(main(['construct', 'ising', '1', '1', '-o', str(path)]) == 0)
    assert(load(path) == ising(1, 1))
    conjugate = tmp_path / 'conjugate.json'
    assert(main(['conjugate', str(path), '--k', '3', '-o', str(conjugate)]) == 0)
    assert(load(conjugate) == ising(3, 1))


def test_construct_to_stdout(capsys):
    assert(main(['construct', 'pointed', '5']) == 0)
    data = json.loads(capsys.readouterr().out)
    assert(len(data['labels']) == 5)


def test_product(tmp_path):
    path = tmp_path / 'product.json'
    assert(main(['product', 'ising/1/+', 'pointed/C2/1', '-o', str(path)]) == 0)
    assert(load(path).rank == 6)


@pytest.mark.parametrize("argv", [
    ['construct', 'nonsense'],
    ['construct', 'ising', '2', '1'],
    ['construct', 'fibonacci'],
    ['verify', 'no/such/entry'],
    ['catalog'],
    ['catalog', '--name', 'no/such/entry'],
    ['catalog', '--name', 'ising//<j>'],
])
def test_usage_errors(capsys, argv):
    assert(main(argv) == 2)
    assert("mdtk: error:" in capsys.readouterr().err)


def test_catalog_list(capsys):
    assert(main(['catalog', '--list']) == 0)
    out = capsys.readouterr().out
    assert("trivial\tbuiltin" in out)
    assert("so5level9/1\tbuiltin" in out)


def test_catalog_names(tmp_path, capsys, ising_json):
    argv = ['catalog', '--name', 'fibonacci/1', '--name', 'ising/1/+',
            '--include', str(ising_json), '--out', str(tmp_path / 'out'),
            '--html', str(tmp_path / 'summary.html')]
    assert(main(argv) == 0)
    out = capsys.readouterr().out
    assert("| fibonacci/1 |" in out)
    assert((tmp_path / 'out' / 'ising' / '1' / '+.json').is_file())
    assert("<table>" in (tmp_path / 'summary.html').read_text())


def test_version(capsys):
    with pytest.raises(SystemExit):
        main(['--version'])
    assert(__version__ in capsys.readouterr().out)


def test_catalog_name_pattern(capsys):
    assert(main(['--json', 'catalog', '--name', 'fibonacci/<j>']) == 0)
    rows = json.loads(capsys.readouterr().out)['entries']
    assert([r['name'] for r in rows] == [f'fibonacci/{j}' for j in range(1, 5)])
    assert({r['class'] for r in rows} == {'fibonacci'})
