import logging
import shutil
import time
import warnings
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from mdtk.bounds import (bound_check, bound_check_product, integrality_checks,
                         key_object, lemma_sweep)
from mdtk.exceptions import MdtkError, OutputError
from mdtk.galois import (conjugate_category, unit_generators,
                         verify_galois_identities, working_conductor)
from mdtk.helpers import load, render_template, save
from mdtk.modular import (ModularDatum, VerificationReport, anomaly, dims,
                          fpdim_pseudounitary, fpdims, fs_exponent, gauss_sum,
                          global_dim, invertibles, ndim, normalized_t_order,
                          verify, verlinde_fusion)
from mdtk.parser import fill_name, match_name, parse_name
from mdtk.validator import validate_entry

logger = logging.getLogger(__name__)

CatalogEntry = namedtuple('CatalogEntry', ['name', 'source', 'datum', 'notes'])

EntryResult = namedtuple('EntryResult', ['entry', 'row', 'reports', 'verdict'])

SUMMARY_COLUMNS = ('name', 'rank', 'FSexp', 'dim', 'Ndim', 'n_t', 'pseudounitary',
                   'bound', 'class', 'status')

OUTPUT_MARKER = '.mdtk-output'


class Catalog:
    """A named collection of modular data, gathered from registered family
    functions and from JSON files.

    :param name: the name of the catalog.
    :param create_backups: whether to zip the previous output on render.
    """

    def __init__(self, name='catalog', create_backups=False):
        self.name = name
        self.create_backups = create_backups
        self.registered_functions = []
        self._file_entries = []

    def register(self, name, validate=True, notes=None):
        """A decorator that registers a family function with a catalog.

        :param name: the entry name, with ``<var>`` tokens filled from the
                     keys of the returned dict.
        :param validate: If True, when the family function returns,
                         it will raise an error if it doesn't return
                         a datum or a dict of data matching the name.
        :param notes: provenance notes; defaults to the docstring.
        """
        if name.startswith('/'):
            raise ValueError("Name argument can't begin with a '/'")
        parse_name(name)

        def decorator(f):
            def wrapper():
                if hasattr(wrapper, '_returned'):
                    return wrapper._returned
                elif hasattr(wrapper, '_called'):
                    raise RuntimeError("Calling functions within themselves not allowed!")
                else:
                    wrapper._called = True

                try:
                    content = f()
                finally:
                    del wrapper._called
                wrapper._returned = content
                if validate:
                    validate_entry(wrapper)
                return content

            wrapper.family = f.__name__
            wrapper.__name__ = f.__name__
            wrapper.__doc__ = f.__doc__
            wrapper.name = name
            wrapper.notes = notes or (f.__doc__ or '').strip()
            wrapper._registered_to = self

            self.registered_functions.append(wrapper)
            return wrapper

        return decorator

    def add_file(self, path, name=None, notes=None):
        """Ingest a JSON data file as a catalog entry.

        :raises ValidationError: if the file is malformed.
        """
        md = load(path)
        if name is not None:
            md.name = name
        entry = CatalogEntry(md.name, 'file', md, notes or f"loaded from {path}")
        self._file_entries.append(entry)
        return entry

    def entries(self):
        """Every entry, registered families first.

        :raises ValueError: if two entries share a name.
        :rtype: list of CatalogEntry
        """
        found = []
        for func in self.registered_functions:
            content = func()
            if isinstance(content, ModularDatum):
                found.append(self._entry(func.name, content, func.notes))
            else:
                for params, md in content.items():
                    found.append(self._entry(fill_name(func.name, params), md, func.notes))
        found.extend(self._file_entries)
        names = set()
        for entry in found:
            if entry.name in names:
                raise ValueError(f"Duplicate catalog entry name {entry.name!r}.")
            names.add(entry.name)
        return found

    @staticmethod
    def _entry(name, md, notes):
        md.name = name
        return CatalogEntry(name, 'builtin', md, notes)

    def get(self, name):
        for entry in self.entries():
            if entry.name == name:
                return entry
        raise KeyError(f"No catalog entry named {name!r}.")

    def select(self, patterns):
        """Entries whose names match any of the patterns, e.g. ``ising/<j>/+``.

        :rtype: list of CatalogEntry
        """
        return [
            entry for entry in self.entries()
            if any(
                entry.name == pattern or ('<' in pattern and match_name(pattern, entry.name) is not None)
                for pattern in patterns
            )
        ]

    def run(self, names=None, jobs=1):
        """Run the pipeline over entries, concurrently when ``jobs > 1``.

        :param names: names or name patterns to run; every entry if None.
        :rtype: list of EntryResult
        """
        entries = self.entries() if names is None else self.select(names)
        logger.info("running %d entries of %s with %d job(s)", len(entries), self.name, jobs)
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(run_entry, entries))
        return [run_entry(entry) for entry in entries]

    def _render_file(self, path, content):
        """Renders a given file to a path. Used by the render function.

        :param path: a path to write to.
        :param content: content to be written to that path.
        """
        if path.exists():
            warnings.warn(f"Overwriting {path}.")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)

    def render(self, path='./dist/', results=None, jobs=1):
        """Write every entry, its report and the summary table to a path.

        :param path: The path to write to.
        :param results: precomputed results; the catalog is run if None.
        :raises OutputError: if the path holds anything mdtk did not render.
        """
        path = Path(path)
        if path.exists() and not (path / OUTPUT_MARKER).is_file() \
                and (not path.is_dir() or any(path.iterdir())):
            raise OutputError(f"{path} is not an mdtk output directory; refusing to replace it.")
        if results is None:
            results = self.run(jobs=jobs)
        if path.exists():
            if self.create_backups:
                shutil.make_archive(str(path.parent / 'old' / f'{self.name}_{time.time()}'), 'zip', path)
            shutil.rmtree(path)
        path.mkdir(parents=True)
        (path / OUTPUT_MARKER).write_text(f"{self.name}\n")
        for result in results:
            save(result.entry.datum, path / f"{result.entry.name}.json")
            self._render_file(path / f"{result.entry.name}.txt", entry_report(result))
        self._render_file(path / 'summary.md', summary_markdown(results))
        return results


def _status(reports, verdict):
    failed = [name for name, report in reports.items() if not report.passed]
    if verdict is not None and not verdict.bound_holds:
        failed.append('bound')
    return 'ok' if not failed else 'FAIL: ' + ', '.join(failed)


def run_entry(entry):
    """Run verification, Galois identities, lemma sweeps and the bound check
    on one entry.

    :rtype: EntryResult
    """
    md = entry.datum
    reports = {}
    verdict = None
    row = dict.fromkeys(SUMMARY_COLUMNS, '-')
    row.update(name=entry.name, rank=md.rank)
    try:
        reports['verify'] = verify(md)
        fs = fs_exponent(md)
        row.update(FSexp=fs, dim=str(global_dim(md)), Ndim=ndim(md))
        if not reports['verify'].passed:
            row['status'] = _status(reports, None)
            return EntryResult(entry, row, reports, None)

        _, n_t = normalized_t_order(md)
        _, pseudounitary = fpdim_pseudounitary(md)
        row.update(n_t=n_t, pseudounitary=pseudounitary)

        galois = verify_galois_identities(md)
        N = working_conductor(md)
        witness = None
        for k in unit_generators(N):
            conjugate = conjugate_category(md, k, check=False)
            if not verify(conjugate).passed or fs_exponent(conjugate) != fs:
                witness = f"conjugation by {k} breaks verification or FSexp"
                break
        galois.add('conjugate-category', witness)
        reports['galois'] = galois
        reports['lemmas'] = lemma_sweep(md)
        reports['integrality'] = integrality_checks(md)

        verdict = bound_check(md)
        row.update(bound=str(verdict), **{'class': str(verdict.extremal_class or '-')})
        if verdict.prime is not None or fs == 1:
            key = VerificationReport(md.name)
            try:
                key.add(f'key-object:{key_object(md)}')
            except MdtkError as err:
                key.add('key-object', str(err))
            reports['key-object'] = key
        row['status'] = _status(reports, verdict)
    except MdtkError as err:
        logger.warning("%s: %s", entry.name, err)
        row['status'] = f"error: {err}"
    return EntryResult(entry, row, reports, verdict)


def product_sweep(entries):
    """The bound over every pair of entries whose product has prime-power FSexp.

    :returns: the verdicts keyed by name pair.
    :rtype: dict
    """
    verdicts = {}
    for i, a in enumerate(entries):
        for b in entries[i:]:
            if a.datum.rank == 1 or b.datum.rank == 1:
                continue
            verdict = bound_check_product(a.datum, b.datum)
            if verdict.prime is None:
                continue
            verdicts[a.name, b.name] = verdict
    logger.info("product sweep: %d prime-power products", len(verdicts))
    return verdicts


def entry_report(result):
    return render_template(
        'report.txt',
        entry=result.entry,
        row=result.row,
        reports=result.reports,
        verdict=result.verdict,
    )


def summary_markdown(results):
    return render_template('summary.md', columns=SUMMARY_COLUMNS, rows=[r.row for r in results])


def summary_json(results):
    return [
        dict(result.row, reports={name: report.to_json() for name, report in result.reports.items()})
        for result in results
    ]


def datum_facts(md):
    """The numbers a report shows for one datum.

    :rtype: dict
    """
    dimensions, D = dims(md)
    g, n_t = normalized_t_order(md)
    fpdim_global, pseudounitary = fpdim_pseudounitary(md)
    return {
        'name': md.name,
        'rank': md.rank,
        'dims': dict(zip(md.labels, dimensions)),
        'fpdims': dict(zip(md.labels, fpdims(md))),
        'dim': D,
        'Ndim': ndim(md),
        'FSexp': fs_exponent(md),
        'n_t': n_t,
        'gamma': g,
        'anomaly': anomaly(md),
        'tau_plus': gauss_sum(md, 1, 1),
        'tau_minus': gauss_sum(md, 1, -1),
        'FPdim': fpdim_global,
        'pseudounitary': pseudounitary,
        'invertibles': sorted(invertibles(verlinde_fusion(md)), key=md.index),
    }
