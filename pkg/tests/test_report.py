import json
import unittest

from fractions import Fraction

from crystbox.cryst_group import CrystGroup, from_canonical_json
from crystbox.catalog import get_entry
from crystbox.report import analyze, to_json, to_text, REPORT_KEYS, InvalidGroup


class TestAnalyze(unittest.TestCase):
    def setUp(self):
        self.group = from_canonical_json(get_entry("FIX-A").group)

    def test_key_order(self):
        report = analyze(self.group)
        self.assertEqual(list(report), [k for k in REPORT_KEYS if k != "complex_structures"])

    def test_values(self):
        report = analyze(self.group)
        self.assertTrue(report["torsion"]["torsion_free"])
        self.assertEqual(report["minimal_denominator"]["d"], 2)
        self.assertEqual(report["extension_class"]["order"], 2)
        self.assertEqual(report["extension_class"]["h2_invariant_factors"], [2, 2])
        self.assertTrue(report["ghm_admissible"])
        self.assertEqual(report["component_dimensions"], [2])
        self.assertEqual(report["eigenvalue_one"], [{"element": 1, "eigenvalue_one": True}])
        self.assertEqual(report["bdf"], {"cyclic": True, "generator": 1, "bdf_admissible": True})

    def test_sampled_structures(self):
        report = analyze(self.group, sample_structure=True)
        self.assertEqual(list(report)[-1], "complex_structures")
        self.assertEqual(len(report["complex_structures"]), 1)
        self.assertIn(report["complex_structures"][0]["orientation_sign"], (1, -1))

    def test_bdf_flag(self):
        report = analyze(from_canonical_json(get_entry("Z4-hyperelliptic").group))
        self.assertTrue(report["bdf"]["bdf_admissible"])
        G = from_canonical_json(get_entry("Z4-hyperelliptic").group).group
        self.assertEqual(G.element_order(report["bdf"]["generator"]), 4)
        self.assertFalse(analyze(from_canonical_json(get_entry("FIX-B").group))
                         ["bdf"]["bdf_admissible"])
        trivial = analyze(from_canonical_json(get_entry("trivial-rank-2").group))
        self.assertEqual(trivial["bdf"], {"cyclic": True, "generator": 0, "bdf_admissible": False})
        C = CrystGroup.from_generators(2, [([[-1, 0], [0, 1]], [0, Fraction(1, 2)]),
                                           ([[1, 0], [0, -1]], [Fraction(1, 2), 0])])
        self.assertEqual(analyze(C)["bdf"], {"cyclic": False, "generator": None,
                                             "bdf_admissible": False})

    def test_torsion_witness(self):
        report = analyze(from_canonical_json(get_entry("FIX-B").group))
        self.assertFalse(report["ghm_admissible"])
        witness = report["torsion"]["witnesses"][0]
        self.assertEqual(witness["order"], 2)
        self.assertEqual(witness["fixed_point"], ["0", "0"])

    def test_invalid_group(self):
        C = CrystGroup.from_generators(2, [([[1, 0], [0, 1]], [Fraction(1, 2), 0])])
        with self.assertRaises(InvalidGroup) as ctx:
            analyze(C)
        self.assertFalse(ctx.exception.validation.valid)

    def test_rendering(self):
        report = analyze(self.group, sample_structure=True)
        self.assertEqual(json.loads(to_json(report))["minimal_denominator"]["d"], 2)
        text = to_text(report)
        self.assertIn("minimal denominator d = 2", text)
        self.assertIn("torsion free: True", text)
        self.assertIn("cyclic G: True, BdF admissible: True", text)


if __name__ == '__main__':
    unittest.main()
