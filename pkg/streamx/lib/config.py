import configparser
import os
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError


"""Environment variable that caps the number of worker processes."""
THREADS_ENV = 'STREAMX_THREADS'


class Config(object):
    def __init__(self):
        self.parser = configparser.ConfigParser()

    def __load_if_necessary(self, path):
        if path is None:
            return

        try:
            with open(path) as fp:
                self.parser.read_file(fp)
        except IOError as e:
            raise StreamxIOError('Cannot read config file: {path} ({reason})'.format(
                path=path, reason=e))

    def load(self, project_path, user_path, default_path):
        """Loads 3 config files (project config, user config, default config).

        Config priority is:
        1. In project config file (PROJECT_DIR/streamx.cfg)
        2. In user config file (~/.streamx)
        3. In default config file (default.cfg)
        """
        self.__load_if_necessary(default_path)
        self.__load_if_necessary(user_path)
        self.__load_if_necessary(project_path)

    def _get(self, section, option, convert):
        raw = self.parser.get(section, option)
        try:
            return convert(raw)
        except ValueError:
            raise ValidationError('Invalid config value: [{section}] {option}={raw}'.format(
                section=section, option=option, raw=raw))

    def tolerance(self):
        """Returns a default tolerance for every numerical solver.
        This config is a "tolerance" option is in the "solver" section.
        """
        return self._get('solver', 'tolerance', float)

    def capacity_max_iter(self):
        """Returns an iteration cap of the capacity solver.
        """
        return self._get('solver', 'capacity_max_iter', int)

    def haroutunian_iterations(self):
        """Returns an iteration count of the projected subgradient method used
        for the Haroutunian exponent.
        """
        return self._get('solver', 'haroutunian_iterations', int)

    def primal_grid_step(self):
        """Returns a step of the input-simplex grid used by the primal
        sphere-packing oracle.
        """
        return self._get('solver', 'primal_grid_step', float)

    def dispersion_starts(self):
        """Returns a number of starting points for the dispersion search on
        channels that are not output symmetric.
        """
        return self._get('solver', 'dispersion_starts', int)

    def search_limit(self):
        """Returns the largest number of continuations the decoder may
        enumerate for a single message.
        """
        return self._get('decoder', 'search_limit', int)

    def threads(self):
        """Returns a number of worker processes for trials.
        STREAMX_THREADS overrides the "threads" option in the "simulation"
        section.
        """
        env_value = os.environ.get(THREADS_ENV)
        if env_value:
            try:
                threads = int(env_value)
            except ValueError:
                raise ValidationError('{name} must be an integer: {value}'.format(
                    name=THREADS_ENV, value=env_value))
        else:
            threads = self._get('simulation', 'threads', int)

        return max(1, threads)

    def chunk_size(self):
        """Returns a number of trials handed to a worker at once.
        """
        return self._get('simulation', 'chunk_size', int)

    def enumeration_limit(self):
        """Returns the largest enumeration the exact oracle accepts.
        """
        return self._get('oracle', 'enumeration_limit', int)

    def typicality_samples(self):
        """Returns a default number of samples for the typicality check.
        """
        return self._get('typicality', 'samples', int)
