import json
import os
import unittest
from unittest import mock

from test.stub_config import StubConfig
from test.stub_environment import StubEnvironment
from test.stub_stdout import StubStdout

from streamx.commands.oracle import OracleCommand
from streamx.lib.argument import ArgumentParser
from streamx.lib.error import ValidationError


SCRIPT_PATH = os.path.dirname(os.path.abspath(__file__))
TINY_INSTANCE_JSON = os.path.join(SCRIPT_PATH, '../fixture/tiny_instance.json')


class TestOracleCommand(unittest.TestCase):
    def setUp(self):
        self.env = StubEnvironment()
        self.cmd = OracleCommand(self.env)
        self.cmd.config = StubConfig()

    def test_run_internal(self):
        self.env.argument = ArgumentParser.parse(
            ['streamx', 'oracle', '--instance', TINY_INSTANCE_JSON])
        with mock.patch('sys.stdout', new_callable=StubStdout) as mock_stdout:
            self.cmd.run_internal()
        data = json.loads(mock_stdout.getvalue())

        self.assertEqual(data['enumeration_size'], 512)
        self.assertEqual([m['k'] for m in data['messages']], [1, 2])
        for message in data['messages']:
            self.assertLessEqual(message['map_error'], message['threshold_error'] + 1e-12)
            self.assertAlmostEqual(message['map_error'], message['window_map_error'],
                                   delta=1e-12)

    def test_enumeration_limit(self):
        StubConfig.ENUMERATION_LIMIT, limit = 100, StubConfig.ENUMERATION_LIMIT
        try:
            self.env.argument = ArgumentParser.parse(
                ['streamx', 'oracle', '--instance', TINY_INSTANCE_JSON])
            with self.assertRaises(ValidationError):
                self.cmd.run_internal()
        finally:
            StubConfig.ENUMERATION_LIMIT = limit

    def test_missing_instance(self):
        self.env.argument = ArgumentParser.parse(['streamx', 'oracle'])
        with self.assertRaises(ValidationError):
            self.cmd.run_internal()


if __name__ == '__main__':
    unittest.main()
