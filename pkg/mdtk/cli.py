"""The ``mdtk`` command line.

Exit codes: 0 on success, 1 when a check fails or the data is not modular,
2 on usage errors.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

from mdtk import builtins
from mdtk.__version__ import __version__
from mdtk.bounds import bound_check
from mdtk.catalog import (Catalog, datum_facts, product_sweep, summary_json,
                          summary_markdown)
from mdtk.construct import (cyclic_metric_group, deligne_product,
                            double_abelian, fibonacci, ising, pointed,
                            so5_level9, trivial)
from mdtk.exceptions import MdtkError
from mdtk.galois import conjugate_category, orbit_t, orbits
from mdtk.helpers import (datum_to_json, load, render_summary_html,
                          render_template, save)
from mdtk.modular import verify, verlinde_fusion

logger = logging.getLogger(__name__)

FAMILIES = {
    'trivial': (trivial, "no parameters"),
    'pointed': (lambda n, a=1: pointed(cyclic_metric_group(n, a)), "n [a]"),
    'ising': (ising, "j eps"),
    'fibonacci': (fibonacci, "j"),
    'so5level9': (so5_level9, "j"),
    'double-abelian': (lambda *orders: double_abelian(orders), "n1 [n2 ...]"),
}


class UsageError(Exception):
    pass


def _emit(args, text, data):
    if args.json:
        print(json.dumps(data, indent=1, default=str, ensure_ascii=False))
    else:
        print(text, end='' if text.endswith('\n') else '\n')


def _open(source):
    """A datum from a JSON file or a builtin catalog entry name."""
    if Path(source).is_file():
        return load(source)
    try:
        return builtins.catalog.get(source).datum
    except KeyError:
        raise UsageError(f"{source} is neither a file nor a builtin entry.")


def _write(args, md):
    if args.output:
        save(md, args.output)
        logger.info("wrote %s to %s", md.name, args.output)
    else:
        print(json.dumps(datum_to_json(md), indent=1, ensure_ascii=False))
    return 0


def cmd_construct(args):
    try:
        family, usage = FAMILIES[args.family]
    except KeyError:
        raise UsageError(f"Unknown family {args.family!r}; choose from {', '.join(FAMILIES)}.")
    try:
        md = family(*args.params)
    except TypeError:
        raise UsageError(f"{args.family} takes: {usage}.")
    except ValueError as err:
        raise UsageError(str(err))
    return _write(args, md)


def cmd_verify(args):
    report = verify(_open(args.file))
    _emit(args, render_template('checks.txt', report=report), report.to_json())
    return 0 if report.passed else 1


def cmd_report(args):
    facts = datum_facts(_open(args.file))
    _emit(args, render_template('datum.txt', facts=facts), facts)
    return 0


def cmd_fusion(args):
    md = _open(args.file)
    ft = verlinde_fusion(md)
    lines = []
    table = {}
    for x in range(md.rank):
        for y in range(x, md.rank):
            product = ft.product(x, y)
            table[f"{md.labels[x]} x {md.labels[y]}"] = product
            terms = ' + '.join(label if m == 1 else f"{m}{label}" for label, m in product.items())
            lines.append(f"{md.labels[x]} ⊗ {md.labels[y]} = {terms}")
    _emit(args, '\n'.join(lines), table)
    return 0


def cmd_orbits(args):
    md = _open(args.file)
    lines = []
    data = {'orbits': [], 'suborbits': {}}
    for o in orbits(md):
        lines.append(f"orbit {{{', '.join(o.labels)}}}: dim {o.dim}")
        data['orbits'].append({'labels': o.labels, 'dim': o.dim})
    for label in md.labels:
        o = orbit_t(md, label)
        lines.append(f"  sub-orbit of {label}: {{{', '.join(o.labels)}}}, dim {o.dim}")
        data['suborbits'][label] = {'labels': o.labels, 'dim': o.dim}
    _emit(args, '\n'.join(lines), data)
    return 0


def cmd_conjugate(args):
    return _write(args, conjugate_category(_open(args.file), args.k))


def cmd_product(args):
    return _write(args, deligne_product(_open(args.a), _open(args.b)))


def cmd_bound_check(args):
    md = _open(args.file)
    verdict = bound_check(md)
    _emit(args, render_template('bound.txt', name=md.name, verdict=verdict), verdict.to_json())
    return 0 if verdict.bound_holds else 1


def cmd_catalog(args):
    catalog = Catalog('cli')
    catalog.registered_functions = list(builtins.catalog.registered_functions)
    for path in args.include:
        catalog.add_file(path)

    if args.list:
        entries = catalog.entries()
        _emit(args, '\n'.join(f"{e.name}\t{e.source}" for e in entries),
              [{'name': e.name, 'source': e.source, 'notes': e.notes} for e in entries])
        return 0

    if not args.all and not args.name:
        raise UsageError("catalog needs one of --list, --name or --all.")
    try:
        unknown = [name for name in args.name if not catalog.select([name])]
    except ValueError as err:
        raise UsageError(str(err))
    if unknown:
        raise UsageError(f"Unknown entries: {', '.join(unknown)}.")
    results = catalog.run(names=None if args.all else args.name, jobs=args.jobs)

    violations = {}
    if args.all:
        verdicts = product_sweep([r.entry for r in results if r.row['status'] == 'ok'])
        violations = {pair: v for pair, v in verdicts.items() if not v.bound_holds}
    if args.out:
        catalog.render(args.out, results=results)
    table = summary_markdown(results)
    if args.html:
        Path(args.html).write_text(render_summary_html(table))

    text = table
    if violations:
        text += ''.join(f"\nproduct {a} ⊠ {b}: {v}" for (a, b), v in violations.items())
    _emit(args, text, {'entries': summary_json(results),
                       'product_violations': [[a, b, str(v)] for (a, b), v in violations.items()]})
    ok = all(r.row['status'] == 'ok' for r in results) and not violations
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog='mdtk', description="Exact modular data toolkit.")
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="-v for progress, -vv for debugging output")
    parser.add_argument('--json', action='store_true', help="machine-readable output")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('construct', help="build a datum of a named family")
    p.add_argument('family', help=', '.join(FAMILIES))
    p.add_argument('params', nargs='*', type=int)
    p.add_argument('-o', '--output')
    p.set_defaults(func=cmd_construct)

    for name, func, text in [
        ('verify', cmd_verify, "check the modular axioms"),
        ('report', cmd_report, "dimensions, exponents, Gauss sums"),
        ('fusion', cmd_fusion, "the Verlinde fusion table"),
        ('orbits', cmd_orbits, "Galois orbits and sub-orbits"),
        ('bound-check', cmd_bound_check, "evaluate the FSexp bound"),
    ]:
        p = sub.add_parser(name, help=text)
        p.add_argument('file', help="a JSON file or a builtin entry name")
        p.set_defaults(func=func)

    p = sub.add_parser('conjugate', help="the Galois conjugate datum")
    p.add_argument('file')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('-o', '--output')
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser('product', help="the Deligne product of two data")
    p.add_argument('a')
    p.add_argument('b')
    p.add_argument('-o', '--output')
    p.set_defaults(func=cmd_product)

    p = sub.add_parser('catalog', help="run the builtin catalog")
    group = p.add_mutually_exclusive_group()
    group.add_argument('--list', action='store_true')
    group.add_argument('--all', action='store_true')
    group.add_argument('--name', action='append', default=[],
                       help="an entry name, or a pattern such as ising/<j>/+")
    p.add_argument('--include', action='append', default=[], help="extra JSON data files")
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--out', help="render entries and reports to a directory")
    p.add_argument('--html', help="write the summary table as HTML")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"mdtk: error: {err}", file=sys.stderr)
        return 2
    except MdtkError as err:
        print(f"mdtk: {err}", file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
