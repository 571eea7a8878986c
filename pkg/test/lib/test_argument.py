import doctest
import unittest

import streamx.lib.argument
from streamx.lib.argument import ArgumentParser


def load_tests(loader, tests, ignore):
    tests.addTests(doctest.DocTestSuite(streamx.lib.argument))
    return tests


class TestArgumentParser(unittest.TestCase):
    def test_parse_with_no_args(self):
        arg = ArgumentParser.parse([])
        self.assertCountEqual(arg.commands, [])
        self.assertEqual(len(arg.options.keys()), 0)

    def test_parse_with_commands(self):
        arg = ArgumentParser.parse(['streamx', 'cmd1', 'cmd2', 'cmd3'])
        self.assertCountEqual(arg.commands, ['cmd1', 'cmd2', 'cmd3'])
        self.assertEqual(len(arg.options.keys()), 0)

    def test_parse_with_key_value_option(self):
        arg = ArgumentParser.parse(['streamx', '--opt1=value'])
        self.assertCountEqual(arg.commands, [])
        self.assertEqual(arg.option('--opt1'), 'value')

    def test_parse_with_separate_value(self):
        arg = ArgumentParser.parse(['streamx', 'exponent', '--rate', '0.1,0.2', '--kind', 'sp'])
        self.assertEqual(arg.commands, ['exponent'])
        self.assertEqual(arg.option('--rate'), '0.1,0.2')
        self.assertEqual(arg.option('--kind'), 'sp')

    def test_parse_with_options(self):
        arg = ArgumentParser.parse(['streamx', '-o', '--opt2'])
        self.assertCountEqual(arg.commands, [])
        self.assertTrue(arg.option('-o'))
        self.assertTrue(arg.option('--opt2'))

    def test_parse_with_flags(self):
        arg = ArgumentParser.parse(['streamx', '--verbose', 'sweep', '--resume', '--gnuplot'])
        self.assertEqual(arg.commands, ['sweep'])
        self.assertIs(arg.option('--verbose'), True)
        self.assertIs(arg.option('--resume'), True)
        self.assertIs(arg.option('--gnuplot'), True)

    def test_parse_with_commands_and_options(self):
        arg = ArgumentParser.parse(['streamx', 'cmd1', '--opt1', 'value1', 'cmd2', '--verbose',
                                    'cmd3'])
        self.assertCountEqual(arg.commands, ['cmd1', 'cmd2', 'cmd3'])
        self.assertEqual(arg.option('--opt1'), 'value1')
        self.assertTrue(arg.option('--verbose'))

    def test_parse_with_negative_value(self):
        # A negative number is not an option name.
        arg = ArgumentParser.parse(['streamx', 'info', '--seed', '-3'])
        self.assertEqual(arg.option('--seed'), '-3')

    def test_option_default(self):
        arg = ArgumentParser.parse(['streamx'])
        self.assertEqual(arg.option('--threads', '1'), '1')


if __name__ == '__main__':
    unittest.main()
