#!/usr/bin/env python3
"""
Built-in crystallographic groups with expected analysis results. The
hyperelliptic entries follow the surface recipe: a translation of order m
on the first elliptic curve (coordinates 1, 2) and an automorphism of
order m of the second one (coordinates 3, 4).
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import logging

from collections import namedtuple

from crystbox.cryst_group import from_canonical_json, to_canonical_json
from crystbox.report import analyze

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

CatalogEntry = namedtuple("CatalogEntry",
                          ["name", "aliases", "group", "expected", "provenance"])
Verification = namedtuple("Verification", ["name", "passed", "diffs"])
FieldDiff = namedtuple("FieldDiff", ["field", "expected", "actual"])

EXPECTED_FIELDS = ("torsion_free", "even", "d", "epsilon_order",
                   "hodge_type_count", "component_dimensions")


def _generator(linear, translation):
    return {"linear": linear, "translation": translation}


def _block(upper):
    """ I_2 on the first curve, the 2x2 matrix upper on the second """
    return [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0] + upper[0], [0, 0] + upper[1]]


def _hyperelliptic(name, aliases, m, automorphism, dims):
    return CatalogEntry(
        name=name, aliases=aliases,
        group={"rank": 4,
               "generators": [_generator(_block(automorphism), ["1/%s" % m, "0", "0", "0"])]},
        expected={"torsion_free": True, "even": True, "d": m, "epsilon_order": m,
                  "hodge_type_count": len(dims), "component_dimensions": dims},
        provenance=(
            "translation by 1/%s on the first curve, automorphism of order %s on the "
            "second. torsion: the invariant first coordinate carries k/%s, so "
            "(L - I)x + u is never integral. d and epsilon: no coboundary changes the "
            "invariant coordinate; order in H^2 from the bar complex. hodge data: "
            "multiplicities from the traces of the powers of L(g)." % (m, m, m)))


def _trivial(n):
    return CatalogEntry(
        name="trivial-rank-%s" % n, aliases=["FIX-TRIV"] if n == 2 else [],
        group={"rank": n, "generators": []},
        expected={"torsion_free": True, "even": True, "d": 1, "epsilon_order": 1,
                  "hodge_type_count": 1, "component_dimensions": [(n // 2) ** 2]},
        provenance=("trivial point group: vacuous torsion and cocycle checks; one real "
                    "character of multiplicity %s, component Gr(%s, %s) of dimension %s"
                    % (n, n // 2, n, (n // 2) ** 2)))


def catalog_entries():
    """ all entries, sorted by name """
    _entries = [
        _trivial(2), _trivial(4), _trivial(6),
        _hyperelliptic("Z2-hyperelliptic", ["FIX-A"], 2, [[-1, 0], [0, -1]], [2]),
        _hyperelliptic("Z3-hyperelliptic", ["FIX-D"], 3, [[0, -1], [1, -1]], [1, 1]),
        _hyperelliptic("Z4-hyperelliptic", [], 4, [[0, -1], [1, 0]], [1, 1]),
        _hyperelliptic("Z6-hyperelliptic", [], 6, [[1, -1], [1, 0]], [1, 1]),
        CatalogEntry(
            name="Z2-torsion", aliases=["FIX-B"],
            group={"rank": 2, "generators": [_generator([[-1, 0], [0, -1]], ["0", "0"])]},
            expected={"torsion_free": False, "even": True, "d": 1, "epsilon_order": 1,
                      "hodge_type_count": 1, "component_dimensions": [1]},
            provenance=("-I on Z^2 without translation: 0 is fixed (split, d = 1); "
                        "det(L - I) = 4 certifies torsion; sign character of "
                        "multiplicity 2 gives Gr(1, 2)")),
        CatalogEntry(
            name="Z2-odd-rank-3", aliases=[],
            group={"rank": 3, "generators": [_generator([[1, 0, 0], [0, -1, 0], [0, 0, -1]],
                                                        ["1/2", "0", "0"])]},
            expected={"torsion_free": True, "even": False, "d": 2, "epsilon_order": 2,
                      "hodge_type_count": 0, "component_dimensions": []},
            provenance=("traces (3, -1) give n = 1 on the trivial and 2 on the sign "
                        "character: odd rank, not even; torsion and d as for the "
                        "rank 4 surface case")),
    ]
    return sorted(_entries, key=lambda e: e.name)


def get_entry(name):
    """ entry by name or alias """
    for e in catalog_entries():
        if name == e.name or name in e.aliases:
            return e
    raise ValueError("no catalog entry named %r" % name)


def _observed(report):
    return {
        "torsion_free": report["torsion"]["torsion_free"],
        "even": report["even"],
        "d": report["minimal_denominator"]["d"],
        "epsilon_order": report["extension_class"]["order"],
        "hodge_type_count": report["hodge_type_count"],
        "component_dimensions": report["component_dimensions"],
    }


def verify_entry(entry):
    """
    Run the full analysis and diff it field by field against the expectation.
    :return: Verification(name, passed, diffs)
    """
    _observed_fields = _observed(analyze(from_canonical_json(entry.group)))
    _diffs = [FieldDiff(f, entry.expected.get(f), _observed_fields[f])
              for f in EXPECTED_FIELDS if entry.expected.get(f) != _observed_fields[f]]
    if _diffs:
        logger.warning("catalog entry %s: %s fields differ", entry.name, len(_diffs))
    return Verification(name=entry.name, passed=not _diffs, diffs=_diffs)


def export(name):
    """ canonical JSON form of an entry """
    return to_canonical_json(from_canonical_json(get_entry(name).group))
