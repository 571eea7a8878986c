import doctest
import unittest

import streamx.lib.stats
from streamx.lib.error import ValidationError
from streamx.lib.stats import clopper_pearson
from streamx.lib.stats import mc_standard_error


def load_tests(loader, tests, ignore):
    tests.addTests(doctest.DocTestSuite(streamx.lib.stats))
    return tests


class TestStats(unittest.TestCase):
    def test_clopper_pearson(self):
        lo, hi = clopper_pearson(10, 100)
        self.assertLess(lo, 0.1)
        self.assertGreater(hi, 0.1)
        self.assertAlmostEqual(lo, 0.0490, delta=1e-3)
        self.assertAlmostEqual(hi, 0.1762, delta=1e-3)

    def test_clopper_pearson_edges(self):
        self.assertEqual(clopper_pearson(0, 10)[0], 0.0)
        self.assertEqual(clopper_pearson(10, 10)[1], 1.0)
        _lo, hi = clopper_pearson(0, 1000)
        # Rule of three.
        self.assertAlmostEqual(hi, 3.0 / 1000, delta=1e-3)

    def test_clopper_pearson_errors(self):
        with self.assertRaises(ValidationError):
            clopper_pearson(1, 0)
        with self.assertRaises(ValidationError):
            clopper_pearson(11, 10)
        with self.assertRaises(ValidationError):
            clopper_pearson(-1, 10)

    def test_mc_standard_error(self):
        self.assertAlmostEqual(mc_standard_error(0.5, 100), 0.05)
        self.assertEqual(mc_standard_error(0.0, 100), 0.0)


if __name__ == '__main__':
    unittest.main()
