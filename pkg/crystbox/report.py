#!/usr/bin/env python3
"""
Full analysis of a crystallographic group, assembled into a plain dict
with a fixed key order and exact values rendered as "p/q" strings.
"""

__license__ = "GPL"
__version__ = "3"
__status__ = "Testing"

import json
import logging

import pandas as pd

from crystbox.exact_linalg import format_rational
from crystbox.cryst_group import (
    validate, torsion_status, eigenvalue_one_filter, minimal_denominator,
    to_canonical_json
)
from crystbox.cohomology import extension_class
from crystbox.repr_hodge import (
    isotypical_decomposition, evenness, component_dimensions,
    sample_complex_structure, character_label
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

REPORT_KEYS = (
    "input", "validation", "torsion", "eigenvalue_one", "minimal_denominator",
    "extension_class", "isotypical", "even", "evenness", "ghm_admissible", "bdf",
    "hodge_type_count", "hodge_types", "component_dimensions", "complex_structures"
)


class InvalidGroup(ValueError):
    """ raised by analyze() for input that fails validation """

    def __init__(self, validation=None):
        self.validation = validation
        super(InvalidGroup, self).__init__(
            "invalid crystallographic group: %s violated identities"
            % len(validation.violations) if validation else "invalid crystallographic group")


def _rationals(v):
    return [format_rational(x) for x in v]


def _matrix(M, render=str):
    return [[render(x) for x in row] for row in M]


def validation_dict(report):
    return {
        "valid": report.valid,
        "violations": [{"kind": v.kind, "elements": list(v.elements), "detail": v.detail}
                       for v in report.violations]
    }


def _sample_dict(sample):
    return {
        "hodge_type": sample.hodge_type.to_dict(),
        "conjugate_type": sample.conjugate_type.to_dict(),
        "orientation_sign": sample.orientation_sign,
        "J": _matrix(sample.J),
        "omega": _matrix(sample.omega),
        "J_float": [[round(float(x), 12) + 0.0 for x in row] for row in sample.J_float],
    }


def analyze(C, sample_structure=False):
    """
    Run every analysis on a crystallographic group.
    :param C: CrystGroup
    :param sample_structure: also construct one complex structure per Hodge type
    :return: dict keyed by REPORT_KEYS (complex_structures only when sampled)
    """
    _validation = validate(C)
    if not _validation.valid:
        raise InvalidGroup(_validation)
    _torsion = torsion_status(C)
    _realization = minimal_denominator(C)
    _epsilon = extension_class(C)
    if _epsilon.order != _realization.d:
        raise RuntimeError("minimal denominator %s differs from the order %s of the "
                           "extension class" % (_realization.d, _epsilon.order))
    _data = isotypical_decomposition(C)
    _even = evenness(_data)
    _components = component_dimensions(_data)
    _ghm = _torsion.is_torsion_free and _even.even
    _generator = C.group.cyclic_generator()
    report = {
        "input": to_canonical_json(C),
        "validation": validation_dict(_validation),
        "torsion": {
            "torsion_free": _torsion.is_torsion_free,
            "witnesses": [{
                "element": w.element,
                "linear": _matrix(C.linear(w.element), int),
                "translation": _rationals(C.translation(w.element)),
                "x": _rationals(w.x),
                "lattice_shift": [int(x) for x in w.lattice_shift],
                "order": w.order,
                "fixed_point": _rationals(w.fixed_point)
            } for w in _torsion.witnesses]
        },
        "eigenvalue_one": [{"element": g, "eigenvalue_one": v}
                           for g, v in sorted(eigenvalue_one_filter(C).items())],
        "minimal_denominator": {
            "d": _realization.d,
            "shift": _rationals(_realization.w),
            "vector_system": [_rationals(u) for u in _realization.group.vector_system]
        },
        "extension_class": {
            "order": int(_epsilon.order),
            "h2_invariant_factors": _epsilon.cohomology.invariant_factors,
            "class_coords": [int(x) for x in _epsilon.class_coords]
        },
        "isotypical": [{"character": c.label, "degree": c.degree,
                        "multiplicity": c.multiplicity, "real": c.real,
                        "conjugate": character_label(c.partner)}
                       for c in _data.characters],
        "even": _even.even,
        "evenness": {
            "rank_even": _even.rank_even,
            "characters": [{"character": r[0], "multiplicity": r[1], "real": r[2], "ok": r[3]}
                           for r in _even.breakdown]
        },
        "ghm_admissible": _ghm,
        "bdf": {
            "cyclic": _generator is not None,
            "generator": _generator,
            "bdf_admissible": _ghm and _generator is not None and C.order > 1
        },
        "hodge_type_count": len(_components),
        "hodge_types": [{
            "nu": r.hodge_type.to_dict(),
            "conjugate_type": r.hodge_type.conjugate(_data).to_dict(),
            "dimension": r.dimension,
            "grassmannians": [{"characters": [character_label(k) for k in f.characters],
                               "nu": f.nu, "multiplicity": f.multiplicity,
                               "dimension": f.dimension} for f in r.factors]
        } for r in _components],
        "component_dimensions": [r.dimension for r in _components]
    }
    if sample_structure and _even.even:
        report["complex_structures"] = [
            _sample_dict(sample_complex_structure(C, r.hodge_type, _data))
            for r in _components]
    logger.info("analysis finished: |G| = %s, d = %s, %s Hodge types",
                C.order, _realization.d, len(_components))
    return report


def to_json(report):
    return json.dumps(report, indent=2)


def to_text(report):
    """ human readable rendering; tables through pandas """
    _lines = []
    _input = report["input"]
    _lines.append("rank %s, %s generators" % (_input["rank"], len(_input["generators"])))
    _torsion = report["torsion"]
    _lines.append("torsion free: %s" % _torsion["torsion_free"])
    for w in _torsion["witnesses"]:
        _lines.append("  element %s: fixed point %s, lift of order %s"
                      % (w["element"], "(%s)" % ", ".join(w["fixed_point"]), w["order"]))
    _lines.append("minimal denominator d = %s (shift w = (%s))"
                  % (report["minimal_denominator"]["d"],
                     ", ".join(report["minimal_denominator"]["shift"])))
    _eps = report["extension_class"]
    _lines.append("extension class: order %s in H^2(G, Z^n) = %s"
                  % (_eps["order"], " + ".join("Z/%s" % d if d else "Z"
                                                for d in _eps["h2_invariant_factors"]) or "0"))
    _lines.append("")
    _lines.append(pd.DataFrame(report["isotypical"]).to_string(index=False))
    _lines.append("")
    _lines.append("even: %s, GHM admissible: %s" % (report["even"], report["ghm_admissible"]))
    _lines.append("cyclic G: %s, BdF admissible: %s"
                  % (report["bdf"]["cyclic"], report["bdf"]["bdf_admissible"]))
    _lines.append("hodge types: %s" % report["hodge_type_count"])
    if report["hodge_types"]:
        _frame = pd.DataFrame([{
            "component": i + 1,
            "hodge type": ", ".join("nu(%s)=%s" % kv for kv in t["nu"].items()),
            "grassmannians": " x ".join("Gr(%s,%s)" % (f["nu"], f["multiplicity"])
                                        for f in t["grassmannians"]),
            "dimension": t["dimension"]} for i, t in enumerate(report["hodge_types"])])
        _lines.append(_frame.to_string(index=False))
    for s in report.get("complex_structures", []):
        _lines.append("")
        _lines.append("complex structure of type %s (orientation %+d)"
                      % (", ".join("nu(%s)=%s" % kv for kv in s["hodge_type"].items()),
                         s["orientation_sign"]))
        _lines.append(pd.DataFrame(s["J_float"]).to_string(header=False, index=False))
    return "\n".join(_lines)
