import doctest
import logging
import unittest

import streamx.lib.logutil
from streamx.lib.logutil import log_level
from streamx.lib.logutil import stopwatch


def load_tests(loader, tests, ignore):
    tests.addTests(doctest.DocTestSuite(streamx.lib.logutil))
    return tests


class TestStopwatch(unittest.TestCase):
    def test_logs_elapsed(self):
        with self.assertLogs(level=logging.DEBUG) as logs:
            with stopwatch('point') as watch:
                pass

        self.assertGreaterEqual(watch.elapsed, 0.0)
        self.assertTrue(any(line.find('point') >= 0 for line in logs.output))


class TestLogLevel(unittest.TestCase):
    def test_restores_level(self):
        logger = logging.getLogger('streamx.test')
        logger.setLevel(logging.WARNING)
        with log_level(logging.DEBUG, logger) as changed:
            self.assertIs(changed, logger)
            self.assertEqual(logger.level, logging.DEBUG)
        self.assertEqual(logger.level, logging.WARNING)

    def test_none_keeps_level(self):
        logger = logging.getLogger('streamx.test')
        logger.setLevel(logging.INFO)
        with log_level(None, logger):
            self.assertEqual(logger.level, logging.INFO)


if __name__ == '__main__':
    unittest.main()
