#!/usr/bin/env python3
"""
Command-line front end: read crystallographic groups in the canonical JSON
form, run analyses and print JSON or text reports.

Exit codes: 0 success, 1 negative analysis result under --strict, 2 input
errors and invalid groups.
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import sys
import json
import logging
import argparse as ap

import pandas as pd

from crystbox.exact_linalg import format_rational
from crystbox.cryst_group import (
    validate, reduce_translations, from_canonical_json, to_canonical_json
)
from crystbox.cohomology import (
    GModule, cohomology_group, splitting_equivalence, affine_fixed_points,
    extension_class_in, parse_overlattice
)
from crystbox.report import analyze, to_json, to_text, validation_dict, InvalidGroup
from crystbox.catalog import catalog_entries, get_entry, verify_entry, export

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2

example_text = str(
    "example: crystbox.py analyze fixA.json --format json\n"
    "         crystbox.py cohomology fixA.json --degree 2 --coefficients scaled:2\n"
    "         crystbox.py catalog verify")
descr_text = str(
    'Exact analysis of Euclidean crystallographic groups: validation, torsion, '
    'minimal denominators, extension classes, splitting over overlattices, '
    'isotypical decomposition and Hodge types')


def _parser():
    parser = ap.ArgumentParser(
        prog="crystbox",
        description=descr_text,
        epilog=example_text,
        formatter_class=ap.RawDescriptionHelpFormatter
    )
    parser.add_argument('-v', '--verbose', help='log debugging output', action='store_true')
    parser.add_argument('-q', '--quiet', help='only log warnings and errors', action='store_true')
    sub = parser.add_subparsers(dest='command')

    def with_format(p):
        p.add_argument('--format', help='report format (default: json)',
                       choices=['json', 'text'], default='json')
        return p

    p = with_format(sub.add_parser('validate', help='check the defining identities'))
    p.add_argument('file', help='group in canonical JSON form ("-" reads stdin)')

    p = with_format(sub.add_parser('analyze', help='run the full analysis'))
    p.add_argument('file', help='group in canonical JSON form ("-" reads stdin)')
    p.add_argument('--sample-structure', help='construct one complex structure per '
                   'Hodge type', action='store_true')
    p.add_argument('--strict', help='exit 1 on torsion or a non-even lattice',
                   action='store_true')

    p = with_format(sub.add_parser('cohomology', help='H^1 or H^2 of the point group'))
    p.add_argument('file', help='group in canonical JSON form')
    p.add_argument('--degree', type=int, choices=[1, 2], required=True)
    p.add_argument('--coefficients', default='lattice',
                   help='lattice, scaled:d or quotient:<overlattice file>')

    p = with_format(sub.add_parser('split', help='splitting over an overlattice'))
    p.add_argument('file', help='group in canonical JSON form')
    p.add_argument('--overlattice', required=True,
                   help='JSON file {"basis": [[p/q, ...], ...]} listing basis vectors')

    p = with_format(sub.add_parser('reduce', help='remove pure translations'))
    p.add_argument('file', help='affine generators in canonical JSON form')

    p = sub.add_parser('catalog', help='built-in groups')
    csub = p.add_subparsers(dest='catalog_command')
    with_format(csub.add_parser('list', help='list entries'))
    v = with_format(csub.add_parser('verify', help='verify entries against expectations'))
    v.add_argument('name', nargs='?', help='entry name (default: all)')
    e = csub.add_parser('export', help='print an entry in canonical JSON form')
    e.add_argument('name')
    return parser


def _read_json(path):
    if path == '-':
        return json.load(sys.stdin)
    with open(path) as f:
        return json.load(f)


def _emit(payload, fmt, text=None):
    if fmt == 'text' and text is not None:
        print(text)
    else:
        print(to_json(payload))


def _validate(args):
    C = from_canonical_json(_read_json(args.file))
    _report = validation_dict(validate(C))
    _text = "valid" if _report["valid"] else "\n".join(
        "%s %s: %s" % (v["kind"], v["elements"], v["detail"]) for v in _report["violations"])
    _emit(_report, args.format, _text)
    return EXIT_OK if _report["valid"] else EXIT_INPUT


def _analyze(args):
    C = from_canonical_json(_read_json(args.file))
    report = analyze(C, sample_structure=args.sample_structure)
    _emit(report, args.format, to_text(report))
    if args.strict and not (report["torsion"]["torsion_free"] and report["even"]):
        return EXIT_NEGATIVE
    return EXIT_OK


def _module(C, coeffs):
    if coeffs == 'lattice':
        return GModule.lattice(C.group)
    if coeffs.startswith('scaled:'):
        return GModule.scaled(C.group, int(coeffs.split(':', 1)[1]))
    if coeffs.startswith('quotient:'):
        return GModule.quotient(C.group, parse_overlattice(_read_json(coeffs.split(':', 1)[1]), C.n))
    raise ValueError("unknown coefficients %r; expected lattice, scaled:d or "
                     "quotient:<file>" % coeffs)


def _cohomology(args):
    C = from_canonical_json(_read_json(args.file))
    _h = cohomology_group(C.group, _module(C, args.coefficients), args.degree)
    _report = {"degree": args.degree, "coefficients": args.coefficients,
               "invariant_factors": _h.invariant_factors, "group": _h.describe()}
    _emit(_report, args.format, "H^%s = %s" % (args.degree, _h.describe()))
    return EXIT_OK


def _split(args):
    C = from_canonical_json(_read_json(args.file))
    _basis = parse_overlattice(_read_json(args.overlattice), C.n)
    _result = splitting_equivalence(C, _basis)
    _points = affine_fixed_points(C, _basis)
    _class = extension_class_in(C, _basis)
    _report = {
        "realizable": _result.realizable,
        "class_vanishes": _result.class_vanishes,
        "has_fixed_point": _result.has_fixed_point,
        "shift": None if _result.shift is None else
        [format_rational(x) for x in _result.shift],
        "fixed_point": None if _result.fixed_point is None else
        [format_rational(x) for x in _result.fixed_point],
        "grid_fixed_points": [[format_rational(x) for x in w] for w in _points],
        "overlattice_class": {
            "order": int(_class.order),
            "h2_invariant_factors": _class.cohomology.invariant_factors,
            "class_coords": [int(x) for x in _class.class_coords]
        }
    }
    _emit(_report, args.format, "splits over the overlattice: %s (%s fixed points on the grid, "
          "class of order %s in H^2 = %s)" % (_result.realizable, len(_points), _class.order,
                                             _class.cohomology.describe()))
    return EXIT_OK


def _reduce(args):
    C = from_canonical_json(_read_json(args.file))
    _reduction = reduce_translations(C.n, C.generators)
    _report = {
        "group": to_canonical_json(_reduction.group),
        "translation_quotient": _reduction.translation_quotient.invariant_factors,
        "basis": [[format_rational(_reduction.basis[i, j]) for i in range(C.n)]
                  for j in range(C.n)]
    }
    _emit(_report, args.format, "translations removed: lattice index %s, reduced |G| = %s"
          % (_reduction.translation_quotient.order(), _reduction.group.order))
    return EXIT_OK


def _catalog(args):
    if args.catalog_command == 'export':
        print(to_json(export(args.name)))
        return EXIT_OK
    if args.catalog_command == 'verify':
        _entries = [get_entry(args.name)] if args.name else catalog_entries()
        _results = [verify_entry(e) for e in _entries]
        _report = [{"name": r.name, "passed": r.passed,
                    "diffs": [{"field": d.field, "expected": d.expected, "actual": d.actual}
                              for d in r.diffs]} for r in _results]
        _frame = pd.DataFrame([(r.name, "pass" if r.passed else "FAIL",
                                "; ".join("%s: expected %s, got %s" % d for d in r.diffs))
                               for r in _results], columns=["entry", "result", "diffs"])
        _emit(_report, args.format, _frame.to_string(index=False))
        return EXIT_OK if all(r.passed for r in _results) else EXIT_NEGATIVE
    _entries = catalog_entries()
    _report = [{"name": e.name, "aliases": e.aliases, "rank": e.group["rank"],
                "provenance": e.provenance} for e in _entries]
    _frame = pd.DataFrame([(e.name, ", ".join(e.aliases), e.group["rank"])
                           for e in _entries], columns=["entry", "aliases", "rank"])
    _emit(_report, args.format, _frame.to_string(index=False))
    return EXIT_OK


_COMMANDS = {
    'validate': _validate,
    'analyze': _analyze,
    'cohomology': _cohomology,
    'split': _split,
    'reduce': _reduce,
    'catalog': _catalog,
}


def run(argv=None):
    """
    Parse argv and run one command.
    :return: exit code
    """
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)
    if args.command is None or (args.command == 'catalog' and args.catalog_command is None):
        parser.print_help()
        return EXIT_INPUT
    try:
        return _COMMANDS[args.command](args)
    except InvalidGroup as e:
        print(str(e), file=sys.stderr)
        for v in e.validation.violations:
            print("  %s %s: %s" % (v.kind, list(v.elements), v.detail), file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, IndexError, KeyError, TypeError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
