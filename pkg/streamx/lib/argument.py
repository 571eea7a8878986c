import re


"""Options that never take a value, so a following token stays a command."""
FLAG_OPTIONS = frozenset([
    '--verbose',
    '--version',
    '--resume',
    '--gnuplot',
    '--records',
])


class Argument(object):
    """Argument class that has parsed commands and options.
    """

    def __init__(self, commands=None, options=None):
        """Creates a container has the sub-command list and the option dictionary.
        """
        self._commands = commands if commands is not None else []
        self._options = options if options is not None else {}

    @property
    def commands(self):
        """Returns a command list.
        """
        return self._commands

    @property
    def options(self):
        """Returns an option dictionary.
        """
        return self._options

    def option(self, name, default=None):
        """Returns an option by the specified name.
        """
        return self._options.get(name, default)


class ArgumentParser(object):
    """Parser class that parses command line arguments.
    """

    """RegExp to check whether the string is a parameter.
    The parameter should have a prefixed-hyphen.
    """
    OPTION_PATTERN = re.compile(r'^(--?[A-Za-z][\w-]*)(?:=(.+))?$')

    @classmethod
    def parse(cls, argv, flags=FLAG_OPTIONS):
        """Split an argv into sub command parts and option parts.
        An option without `=` takes the next token as its value unless it is
        a flag or the next token is another option.
        The return value is an instance of Argument.

        Usage::
            >>> arg = ArgumentParser.parse(['streamx', 'info', '--channel', 'bsc:0.11'])
            >>> arg.commands
            ['info']
            >>> arg.option('--channel')
            'bsc:0.11'
        """
        commands = []
        options = {}
        args = argv[1:]
        index = 0

        while index < len(args):
            arg = args[index]
            index += 1

            if not cls._is_option(arg):
                commands.append(arg)
                continue

            key, value = cls._parse_option(arg)
            if value is None:
                if (key not in flags and index < len(args)
                        and not cls._is_option(args[index])):
                    value = args[index]
                    index += 1
                else:
                    value = True

            options[key] = value

        return Argument(commands, options)

    @classmethod
    def _is_option(cls, arg):
        return cls.OPTION_PATTERN.match(arg) is not None

    @classmethod
    def _parse_option(cls, option):
        m = cls.OPTION_PATTERN.match(option)
        return (m.group(1), m.group(2))
