from streamx.commands.candidates import CandidatesCommand
from streamx.commands.exponent import ExponentCommand
from streamx.commands.info import InfoCommand
from streamx.commands.oracle import OracleCommand
from streamx.commands.simulate import SimulateCommand
from streamx.commands.sweep import SweepCommand
from streamx.commands.typicality import TypicalityCommand


class CommandTable(object):
    """Maps subcommand names to command classes.

    streamx has a single level of subcommands. Names that start with an
    underscore are internal: they run, but help and completion hide them.
    """

    DEFAULT_COMMANDS = {
        '_candidates': CandidatesCommand,
        'exponent': ExponentCommand,
        'info': InfoCommand,
        'oracle': OracleCommand,
        'simulate': SimulateCommand,
        'sweep': SweepCommand,
        'typicality': TypicalityCommand,
    }

    """Internal command that receives the rest of the command line as its
    own arguments."""
    COMPLETION_COMMAND = '_candidates'

    def __init__(self, commands=None):
        if commands is None:
            commands = CommandTable.DEFAULT_COMMANDS.copy()
        self._commands = commands

    @classmethod
    def is_internal_command(cls, name):
        """Whether the specified command is an internal command.

        Usage::
            >>> CommandTable.is_internal_command('_candidates')
            True
            >>> CommandTable.is_internal_command('sweep')
            False
        """
        return name.startswith('_')

    def right_commands(self, args):
        """Returns the leading part of args that names a command.

        Usage::
            >>> CommandTable().right_commands(['sweep', 'extra'])
            ['sweep']
            >>> CommandTable().right_commands(['swep'])
            []
        """
        if args and args[0] in self._commands:
            return list(args[:1])
        return []

    def available_commands(self, args=()):
        """Returns the public command names that may follow args.

        Usage::
            >>> CommandTable().available_commands()
            ['exponent', 'info', 'oracle', 'simulate', 'sweep', 'typicality']
            >>> CommandTable().available_commands(['info'])
            []
        """
        if args:
            return []
        return sorted(name for name in self._commands
                      if not CommandTable.is_internal_command(name))

    def command_class(self, args):
        """Returns the command class named by args, or None when args name no
        command or carry extra words.

        Usage::
            >>> CommandTable().command_class(['info']).__name__
            'InfoCommand'
            >>> CommandTable().command_class(['info', 'extra']) is None
            True
        """
        if not args:
            return None

        name = args[0]
        if name == CommandTable.COMPLETION_COMMAND:
            return self._commands.get(name)
        if len(args) > 1:
            return None
        return self._commands.get(name)
