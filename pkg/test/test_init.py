import unittest
import logging
from unittest import mock

import streamx
from streamx.lib.error import ConvergenceError
from streamx.lib.error import InvalidOptionError


class TestStreamx(unittest.TestCase):
    def test_run(self):
        MockCmd = mock.MagicMock()
        mock_cmd = MockCmd.return_value

        with mock.patch('streamx.Help'), \
                mock.patch('streamx.Environment', return_value='dummy_env') as MockEnv, \
                mock.patch('streamx.CommandTable') as MockTable, \
                mock.patch('logging.basicConfig') as mock_basic_cfg:
            MockTable.return_value.command_class.return_value = MockCmd

            streamx.main(['/DUMMY.py', 'dummy1', 'dummy2'])

        mock_basic_cfg.assert_called_once_with(level=logging.INFO, format='%(message)s')
        MockTable.return_value.command_class.assert_called_once_with(['dummy1', 'dummy2'])
        MockCmd.assert_called_once_with('dummy_env')
        self.assertTrue(MockEnv.called)
        mock_cmd.run.assert_called_once_with()

    def test_run_with_empty_args(self):
        with mock.patch('streamx.Help') as MockHelp, \
                mock.patch('streamx.CommandTable') as MockTable, \
                mock.patch('logging.basicConfig'):
            MockTable.return_value.command_class.return_value = None

            with self.assertRaises(SystemExit) as cm:
                streamx.main(['/DUMMY.py'])

        self.assertEqual(cm.exception.code, 0)
        self.assertTrue(MockHelp.return_value.print_help.called)

    def test_run_with_invalid_args(self):
        with mock.patch('streamx.Help') as MockHelp, \
                mock.patch('streamx.CommandTable') as MockTable, \
                mock.patch('logging.basicConfig'):
            MockTable.return_value.command_class.return_value = None

            with self.assertRaises(SystemExit) as cm:
                streamx.main(['/DUMMY.py', 'dummy'])

        self.assertEqual(cm.exception.code, 1)
        self.assertTrue(MockHelp.return_value.print_help.called)

    def test_run_with_version(self):
        with mock.patch('streamx.print_version') as mock_print_version, \
                mock.patch('logging.basicConfig'):
            with self.assertRaises(SystemExit):
                streamx.main(['/DUMMY.py', '--version'])

        mock_print_version.assert_called_once_with()

    def test_run_with_exception(self):
        MockCmd = mock.MagicMock()
        MockCmd.return_value.run.side_effect = ConvergenceError('DUMMY')

        with mock.patch('streamx.Help') as MockHelp, \
                mock.patch('streamx.Environment', return_value='dummy_env'), \
                mock.patch('streamx.CommandTable') as MockTable, \
                mock.patch('logging.basicConfig'), \
                mock.patch('logging.error') as mock_error:
            MockTable.return_value.command_class.return_value = MockCmd

            with self.assertRaises(SystemExit) as cm:
                streamx.main(['/DUMMY.py', 'dummy1'])

        self.assertEqual(cm.exception.code, ConvergenceError.EXIT_CODE)
        self.assertTrue(mock_error.called)
        self.assertFalse(MockHelp.return_value.print_help.called)

    def test_run_with_invalid_option(self):
        MockCmd = mock.MagicMock()
        MockCmd.return_value.run.side_effect = InvalidOptionError(['--foo'])

        with mock.patch('streamx.Help') as MockHelp, \
                mock.patch('streamx.Environment', return_value='dummy_env'), \
                mock.patch('streamx.CommandTable') as MockTable, \
                mock.patch('logging.basicConfig'), \
                mock.patch('logging.error'):
            MockTable.return_value.command_class.return_value = MockCmd

            with self.assertRaises(SystemExit) as cm:
                streamx.main(['/DUMMY.py', 'dummy1', '--foo'])

        self.assertEqual(cm.exception.code, 1)
        self.assertTrue(MockHelp.return_value.print_help.called)


if __name__ == '__main__':
    unittest.main()
