import difflib
from streamx.lib.i18n import _


class Help(object):
    """Prints usage, the commands available at the typed command path (or
    the closest matches of a mistyped one) and the options of a command.
    """

    """Commands at least this similar to a mistyped one are suggested."""
    CANDIDATE_RATIO_THRESHOLD = 0.5

    def __init__(self, table, argument):
        self._table = table
        self._argument = argument
        self._correct_commands = table.right_commands(argument.commands)
        self._available_commands = table.available_commands(self._correct_commands)
        self._command_class = table.command_class(argument.commands)

    def _is_valid_commands(self):
        commands = self._argument.commands
        return (not commands) or (commands == self._correct_commands)

    def _print_usage(self):
        marks = []
        if self._available_commands:
            marks.append(_('<command>'))
        if self._command_class is not None:
            marks.append(_('[options]'))

        words = ['streamx'] + self._correct_commands + marks
        print(_('Usage: {line}').format(line=' '.join(words)))

    @classmethod
    def summary(cls, command_class):
        """Returns the first line of the docstring of a command class.

        Usage::
            >>> class Stub(object):
            ...     '''Does things.
            ...     More detail.
            ...     '''
            >>> Help.summary(Stub)
            'Does things.'
        """
        doc = command_class.__doc__ or ''
        lines = [line.strip() for line in doc.strip().splitlines()]
        return lines[0] if lines else ''

    @classmethod
    def similarity(cls, src_command):
        """Returns a function that returns a similarity ratio for the specified
        command.
        """
        def ratio(command):
            return difflib.SequenceMatcher(None, src_command, command).ratio()
        return ratio

    @classmethod
    def candidates(cls, available_commands, src_command):
        """Returns the available commands similar enough to src_command, the
        most similar first.

        Usage::
            >>> Help.candidates(['simulate', 'sweep', 'info'], 'simulat')
            ['simulate']
        """
        if src_command is None:
            return available_commands

        ratio = Help.similarity(src_command)
        candidates = sorted(available_commands, key=ratio, reverse=True)
        return [x for x in candidates if ratio(x) >= Help.CANDIDATE_RATIO_THRESHOLD]

    def _print_commands(self, title, commands):
        print('')
        print(title)
        for name in commands:
            command_class = self._table.command_class(self._correct_commands + [name])
            summary = Help.summary(command_class) if command_class is not None else ''
            print('    {name:<12}{summary}'.format(name=name, summary=summary).rstrip())

    def _print_available_commands(self, command):
        if not self._available_commands:
            return

        if self._is_valid_commands():
            self._print_commands(_('Available commands:'), self._available_commands)
            return

        candidates = Help.candidates(self._available_commands, command)
        if len(candidates) == 0:
            self._print_commands(_('Available commands:'), self._available_commands)
        elif len(candidates) == 1:
            self._print_commands(_('Did you mean this?'), candidates)
        else:
            self._print_commands(_('Did you mean one of these?'), candidates)

    def _print_available_options(self):
        if self._command_class is None:
            return

        supported_options = self._command_class.supported_options()
        if not supported_options:
            return

        print('')
        print(_('Available options:'))
        for name in sorted(supported_options):
            print('    ' + name)

    def print_help(self):
        """Prints a help message.
        """
        last_command = None if not self._argument.commands else self._argument.commands[-1]

        if not self._is_valid_commands():
            print(_('Invalid command: {cmd}').format(cmd=last_command))
            print('')

        self._print_usage()
        self._print_available_commands(last_command)
        self._print_available_options()
