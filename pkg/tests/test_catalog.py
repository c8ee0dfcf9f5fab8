import json
import pytest

from mdtk import builtins
from mdtk.bounds import ExtremalClass, galois_pseudounitary
from mdtk.catalog import (OUTPUT_MARKER, SUMMARY_COLUMNS, Catalog,
                          datum_facts, product_sweep, run_entry, summary_json)
from mdtk.construct import (cyclic_metric_group, fibonacci, ising, pointed,
                            trivial)
from mdtk.exceptions import OutputError, ValidationError
from mdtk.helpers import load
from mdtk.modular import ModularDatum

from fixtures.data import catalog, ising_json, FILE_DIR


def test_single_entry(catalog):
    @catalog.register('ising')
    def ising_entry():
        return ising(1, 1)

    entries = catalog.entries()
    assert([e.name for e in entries] == ['ising'])
    assert(entries[0].source == 'builtin')
    assert(entries[0].datum.name == 'ising')


def test_one_var_entries(catalog):
    @catalog.register('fibonacci/<j>')
    def fib_entries():
        return {j: fibonacci(j) for j in (1, 2)}

    assert([e.name for e in catalog.entries()] == ['fibonacci/1', 'fibonacci/2'])


def test_multi_var_entries(catalog):
    @catalog.register('ising/<j>/<eps>')
    def ising_entries():
        return {(1, '+'): ising(1, 1), (3, '-'): ising(3, -1)}

    assert(catalog.get('ising/3/-').datum == ising(3, -1))
    with pytest.raises(KeyError):
        catalog.get('ising/5/+')


def test_select_patterns(catalog):
    @catalog.register('ising/<j>/<eps>')
    def ising_entries():
        return {(j, eps): ising(j, 1 if eps == '+' else -1) for j in (1, 3) for eps in '+-'}

    assert([e.name for e in catalog.select(['ising/<j>/+'])] == ['ising/1/+', 'ising/3/+'])
    assert([e.name for e in catalog.select(['ising/3/-'])] == ['ising/3/-'])
    assert(catalog.select(['fibonacci/<j>']) == [])


def test_malformed_name_rejected(catalog):
    with pytest.raises(ValueError, match="empty segment"):
        @catalog.register('ising//<j>')
        def entry():
            return None


@pytest.mark.parametrize("entry_name", [
    ("/ising"),
    ("/pointed/<n>"),
])
def test_starts_slash_error(catalog, entry_name):

    with pytest.raises(ValueError, match="can't begin with"):
        @catalog.register(entry_name, validate=False)
        def entry():
            return None


def test_duplicate_names(catalog):
    @catalog.register('same')
    def first():
        return ising(1, 1)

    @catalog.register('same')
    def second():
        return fibonacci(1)

    with pytest.raises(ValueError, match="Duplicate"):
        catalog.entries()


def test_entry_chain(catalog):
    @catalog.register('product')
    def product():
        return max(pointed_entries().values(), key=lambda md: md.rank)

    @catalog.register('pointed/<n>')
    def pointed_entries():
        return {n: pointed(cyclic_metric_group(n)) for n in (3, 5)}

    assert(catalog.get('product').datum.rank == 5)


def test_entry_consistency(catalog):
    @catalog.register('trivial')
    def trivial_entry():
        return trivial()

    assert(trivial_entry() is trivial_entry())
    assert(trivial_entry.family == 'trivial_entry')
    assert(trivial_entry.name == 'trivial')


def test_validation(catalog):
    with pytest.raises(ValidationError, match="did not return"):
        @catalog.register('fail')
        def fail():
            return None
        fail()

    @catalog.register('fail_novalidate', validate=False)
    def fail_novalidate():
        return None
    fail_novalidate()

    @catalog.register('needs/<j>')
    def needs_params():
        return ising(1, 1)
    with pytest.raises(ValidationError, match="requires parameters"):
        needs_params()


@pytest.mark.parametrize('call_self', [True, False])
def test_recursion_error(catalog, call_self):
    @catalog.register('a')
    def a():
        if call_self:
            a()
        else:
            b()

    @catalog.register('b')
    def b():
        a()

    with pytest.raises(RuntimeError, match="within themselves"):
        a()


def test_notes_default_to_docstring(catalog):
    @catalog.register('documented')
    def documented():
        """The Ising datum at j = 1."""
        return ising(1, 1)

    @catalog.register('annotated', notes="by hand")
    def annotated():
        return ising(3, 1)

    notes = {e.name: e.notes for e in catalog.entries()}
    assert(notes == {'documented': "The Ising datum at j = 1.", 'annotated': "by hand"})


def test_add_file(catalog, ising_json):
    entry = catalog.add_file(ising_json)
    assert(entry.source == 'file')
    assert(entry.datum == ising(1, 1))
    assert(catalog.get(entry.name) is entry)


def test_add_file_rejects_malformed(catalog):
    with pytest.raises(ValidationError, match="unit normalization"):
        catalog.add_file(FILE_DIR / 'bad_unit.json')


def test_run_entry_ok(catalog):
    @catalog.register('ising')
    def ising_entry():
        return ising(1, 1)

    result = run_entry(catalog.get('ising'))
    assert(result.row['status'] == 'ok')
    assert(result.row['FSexp'] == 16)
    assert(result.row['Ndim'] == 4)
    assert(result.row['n_t'] == 16)
    assert(result.row['class'] == 'ising-x-pointed(1)')
    assert(set(result.reports) == {'verify', 'galois', 'lemmas', 'integrality', 'key-object'})
    assert(result.reports['galois']['conjugate-category'].passed)
    assert(result.reports['key-object'].checks[0].name == 'key-object:1')


def test_run_entry_failure(catalog):
    @catalog.register('bad')
    def bad():
        md = ising(1, 1)
        S = [list(row) for row in md.S]
        S[1][1] = -S[1][1]
        return ModularDatum(md.labels, S, md.T)

    result = run_entry(catalog.get('bad'))
    assert(result.row['status'].startswith('FAIL: '))
    assert('verify' in result.row['status'])
    assert(result.verdict is None)


def test_render(tmp_path, catalog, ising_json):
    @catalog.register('fibonacci/<j>')
    def fib_entries():
        return {j: fibonacci(j) for j in (1, 2)}

    catalog.add_file(ising_json, name='ising-file')
    results = catalog.render(path=tmp_path / 'out')
    assert(len(results) == 3)
    for name in ('fibonacci/1', 'fibonacci/2', 'ising-file'):
        assert((tmp_path / 'out' / f"{name}.json").is_file())
        assert((tmp_path / 'out' / f"{name}.txt").is_file())
    assert(load(tmp_path / 'out' / 'fibonacci/1.json') == fibonacci(1))
    summary = (tmp_path / 'out' / 'summary.md').read_text()
    assert(summary.startswith('| ' + ' | '.join(SUMMARY_COLUMNS) + ' |'))
    assert('| fibonacci/2 | 2 | 5 |' in summary)
    report = (tmp_path / 'out' / 'ising-file.txt').read_text()
    assert("16 ≤ 4·4, extremal tier 4·Ndim" in report)
    assert("== galois ==" in report)


def test_render_backup(tmp_path):
    catalog = Catalog('backed', create_backups=True)

    @catalog.register('trivial')
    def trivial_entry():
        return trivial()

    catalog.render(path=tmp_path / 'out')
    catalog.render(path=tmp_path / 'out')
    assert(len(list((tmp_path / 'old').glob('backed_*.zip'))) == 1)


def test_render_refuses_foreign_directory(tmp_path, catalog):
    @catalog.register('trivial')
    def trivial_entry():
        return trivial()

    keep = tmp_path / 'out' / 'notes.txt'
    keep.parent.mkdir()
    keep.write_text("mine")
    with pytest.raises(OutputError, match="refusing"):
        catalog.render(path=tmp_path / 'out')
    assert(keep.read_text() == "mine")


def test_render_replaces_own_output(tmp_path, catalog):
    @catalog.register('trivial')
    def trivial_entry():
        return trivial()

    catalog.render(path=tmp_path / 'out')
    stale = tmp_path / 'out' / 'stale.json'
    stale.write_text("{}")
    catalog.render(path=tmp_path / 'out')
    assert(not stale.exists())
    assert((tmp_path / 'out' / OUTPUT_MARKER).is_file())


def test_summary_json_serializes(catalog):
    @catalog.register('fibonacci')
    def fib():
        return fibonacci(1)

    data = summary_json(catalog.run(jobs=2))
    text = json.dumps(data, default=str)
    assert(json.loads(text)[0]['reports']['verify']['passed'])


def test_datum_facts():
    facts = datum_facts(fibonacci(1))
    assert(facts['Ndim'] == 5)
    assert(facts['FSexp'] == 5)
    assert(facts['pseudounitary'])
    assert(facts['invertibles'] == ['1'])
    assert(facts['rank'] == 2)


def test_builtin_catalog():
    names = [e.name for e in builtins.catalog.entries()]
    assert('trivial' in names)
    assert('ising/1/+' in names and 'ising/15/-' in names)
    assert(len([n for n in names if n.startswith('ising/')]) == 16)
    assert('fibonacci/4' in names)
    assert('so5level9/8' in names)
    assert('pointed/C27/1' in names)
    assert('double/C3' in names)
    assert('product/ising⊠C2xC2' in names)


def test_builtin_catalog_passes():
    results = builtins.catalog.run(jobs=4)
    bad = {r.entry.name: r.row['status'] for r in results if r.row['status'] != 'ok'}
    assert(bad == {})
    sample = ('ising/1/+', 'ising/3/-', 'fibonacci/1', 'pointed/C2/1', 'pointed/C4/1', 'pointed/C5/1')
    verdicts = product_sweep([r.entry for r in results if r.entry.name in sample])
    assert(('ising/1/+', 'ising/3/-') in verdicts)
    assert(all(v.bound_holds for v in verdicts.values()))
    classes = {r.entry.name: r.row['class'] for r in results}
    assert(classes['ising/1/+'] == 'ising-x-pointed(1)')
    assert(classes['fibonacci/1'] == 'fibonacci')
    assert(classes['fibonacci/2'] == 'fibonacci')
    assert(classes['so5level9/1'] == 'unclassified')
    assert(classes['product/ising⊠C2'] == 'ising-x-pointed(2)')
    assert(classes['product/ising⊠ising'] == 'ising-x-ising')
    assert(classes['double/C2'] == '-')


def test_extremal_entries_classify():
    for result in builtins.catalog.run(jobs=4):
        verdict = result.verdict
        if verdict is None or not verdict.extremal:
            continue
        md = result.entry.datum
        if result.entry.name.startswith('so5level9/'):
            assert(verdict.extremal_class == ExtremalClass.UNCLASSIFIED)
            assert(not galois_pseudounitary(md))
        else:
            assert(verdict.extremal_class != ExtremalClass.UNCLASSIFIED), result.entry.name
