import json
import logging
import os
import streamx.lib.path
from streamx.lib.config import Config
from streamx.lib.error import InvalidOptionError
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError
from streamx.lib.i18n import _
from streamx.lib.logutil import log_level


class Command(object):
    """A base class for commands.
    """

    def __init__(self, env):
        """Create a command that depend the specified environment.
        """
        self.env = env
        self.config = env.config

    @classmethod
    def needs_config(cls):
        """Whether this command reads solver and simulation settings.
        """
        return True

    @classmethod
    def supported_options(cls):
        """Returns a set has supported options by this command.
        In default, all command should support a --verbose option to display
        verbose messages.
        """
        return set(['--verbose'])

    def _validate_options(self):
        opts = set(self.env.argument.options.keys())
        unsupported_opts = opts - self.__class__.supported_options()

        if len(unsupported_opts) > 0:
            raise InvalidOptionError(unsupported_opts)

    def _load_config(self):
        default_config = streamx.lib.path.default_config()
        user_config = streamx.lib.path.user_config()
        project_config = streamx.lib.path.project_config(self.env.cwd)

        config = Config()
        config.load(project_config, user_config, default_config)
        return config

    def _setup(self):
        if self.__class__.needs_config():
            if self.config is None:
                self.config = self._load_config()

        os.chdir(self.env.cwd)

    def option(self, name, convert=str, default=None):
        """Returns the value of an option converted by convert, or default
        when the option is absent.
        """
        value = self.env.argument.option(name)
        if value is None:
            return default
        if value is True:
            raise ValidationError(_('Option {name} needs a value').format(name=name))
        try:
            return convert(value)
        except ValueError:
            raise ValidationError(_('Invalid value of {name}: {value}').format(
                name=name, value=value))

    def required_option(self, name, convert=str):
        value = self.option(name, convert)
        if value is None:
            raise ValidationError(_('Missing option: {name}').format(name=name))
        return value

    def flag(self, name):
        return bool(self.env.argument.option(name))

    def emit(self, data, path=None):
        """Writes data as JSON to the specified path, or prints it.
        """
        text = json.dumps(data, indent=2, sort_keys=True)
        if path is None:
            print(text)
            return

        try:
            with open(path, 'w') as f:
                f.write(text + '\n')
        except IOError as e:
            raise StreamxIOError(_('Cannot write {path}: {err}').format(path=path, err=e))
        logging.info(_('Wrote {path}').format(path=path))

    def run(self):
        """Runs this command.
        Override run_internal instead of run if you want to implement a new
        command.
        """
        level = logging.DEBUG if self.env.argument.option('--verbose') else None
        with log_level(level):
            self._validate_options()
            self._setup()
            self.run_internal()

    def run_internal(self):
        """Internal method for running command.
        You can change a command behavior by overriding this method.
        """
        pass


def float_list(text):
    """Converts comma-separated numbers to a list of floats.

    Usage::
        >>> float_list('0.1,0.2')
        [0.1, 0.2]
    """
    return [float(item) for item in text.split(',') if item.strip()]
