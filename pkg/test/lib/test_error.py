import unittest

from streamx.lib.error import ConvergenceError
from streamx.lib.error import InvalidOptionError
from streamx.lib.error import StreamxError
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError


class TestStreamxError(unittest.TestCase):
    def test_init(self):
        message = 'Yeah'
        error = StreamxError(message)

        self.assertTrue(isinstance(error, Exception))
        self.assertEqual(str(error), message)
        self.assertEqual(error.message, message)

    def test_exit_codes(self):
        self.assertEqual(StreamxError.EXIT_CODE, 1)
        self.assertEqual(InvalidOptionError.EXIT_CODE, 1)
        self.assertEqual(ValidationError.EXIT_CODE, 2)
        self.assertEqual(ConvergenceError.EXIT_CODE, 3)
        self.assertEqual(StreamxIOError.EXIT_CODE, 4)


class TestInvalidOptionError(unittest.TestCase):
    def test_init(self):
        opts = ['--foo', '--bar']
        error = InvalidOptionError(opts)

        for opt in opts:
            self.assertTrue(str(error).find(opt) >= 0)
        self.assertEqual(error.options, opts)


class TestConvergenceError(unittest.TestCase):
    def test_init(self):
        error = ConvergenceError('Did not converge', (0.1, 0.2))
        self.assertTrue(isinstance(error, StreamxError))
        self.assertEqual(error.gap, (0.1, 0.2))
        self.assertTrue(str(error).find('(0.1, 0.2)') >= 0)

    def test_init_without_gap(self):
        error = ConvergenceError('Did not converge')
        self.assertIsNone(error.gap)
        self.assertEqual(str(error), 'Did not converge')


if __name__ == '__main__':
    unittest.main()
