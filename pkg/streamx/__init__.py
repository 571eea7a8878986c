import logging
import os
import sys
from streamx.lib.argument import ArgumentParser
from streamx.lib.command_table import CommandTable
from streamx.lib.environment import Environment
from streamx.lib.error import InvalidOptionError
from streamx.lib.error import StreamxError
from streamx.lib.i18n import _
from streamx.lib.help import Help


VERSION = '0.1.0'


def print_version():
    """Prints a streamx version.
    """
    print(_('streamx {version}').format(version=VERSION))


def main(argv=None):
    """Run streamx.

    Exit codes: 0 on success, 1 for an invalid command or option, 2 for a
    validation error, 3 when a solver does not converge, 4 for I/O errors.
    """
    argv = sys.argv if argv is None else argv
    cwd = os.getcwd()
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    table = CommandTable()

    arg = ArgumentParser.parse(argv)

    if not arg.commands and arg.option('--version'):
        print_version()
        sys.exit()

    CommandClass = table.command_class(arg.commands)
    if CommandClass is None:
        Help(table, arg).print_help()
        sys.exit(0 if not arg.commands else InvalidOptionError.EXIT_CODE)

    try:
        env = Environment(cwd, arg, table)
        command = CommandClass(env)
        command.run()
    except InvalidOptionError as e:
        logging.error(_('[Error] {message}').format(message=str(e)))
        Help(table, arg).print_help()
        sys.exit(e.EXIT_CODE)
    except StreamxError as e:
        logging.error(_('[Error] {message}').format(message=str(e)))
        sys.exit(e.EXIT_CODE)
