import json
import unittest
from unittest import mock

from test.stub_config import StubConfig
from test.stub_environment import StubEnvironment
from test.stub_stdout import StubStdout

from streamx.commands.typicality import TypicalityCommand
from streamx.lib.argument import ArgumentParser
from streamx.lib.error import ValidationError


class TestTypicalityCommand(unittest.TestCase):
    def setUp(self):
        self.env = StubEnvironment()
        self.cmd = TypicalityCommand(self.env)
        self.cmd.config = StubConfig()

    def run_with_args(self, args):
        self.env.argument = ArgumentParser.parse(['streamx', 'typicality'] + args)
        with mock.patch('sys.stdout', new_callable=StubStdout) as mock_stdout:
            self.cmd.run_internal()
        return json.loads(mock_stdout.getvalue())

    def test_run_internal(self):
        data = self.run_with_args(['--v', 'bsc:0.2', '--w', 'bsc:0.1', '--length', '2000',
                                   '--gamma1', '0.1', '--gamma2', '0.1', '--seed', '4'])
        self.assertEqual(data['samples'], StubConfig.TYPICALITY_SAMPLES)
        self.assertEqual(data['floor_violations'], 0)
        self.assertGreaterEqual(data['empirical'], data['bound'])
        self.assertTrue(data['pinsker']['holds'])
        self.assertGreater(data['gamma_prime'], 0.0)

    def test_symbol(self):
        data = self.run_with_args(['--v', 'bsc:0.2', '--w', 'bsc:0.1', '--length', '500',
                                   '--gamma1', '0.1', '--gamma2', '0.1', '--symbol', '1',
                                   '--samples', '20'])
        self.assertEqual(data['samples'], 20)

    def test_invalid(self):
        base = ['--v', 'bsc:0.2', '--w', 'bsc:0.1', '--gamma1', '0.1', '--gamma2', '0.1']
        with self.assertRaises(ValidationError):
            self.run_with_args(base + ['--length', '100', '--symbol', '2'])
        with self.assertRaises(ValidationError):
            self.run_with_args(base + ['--length', '0'])
        with self.assertRaises(ValidationError):
            self.run_with_args(base)


if __name__ == '__main__':
    unittest.main()
