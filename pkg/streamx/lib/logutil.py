import logging
import time


class LogLevelChanger(object):
    """Log level changer for with-statements.

    This class temporarily changes a log level of the specified logger in a `with` statement.
    You can get the logger by `as` clause.

    Usage::
        >>> logger = logging.getLogger('test')
        >>> logger.setLevel(logging.INFO)
        >>> with LogLevelChanger(logging.DEBUG, logger):
        ...     assert logger.level == logging.DEBUG
        ...
        >>> assert logger.level == logging.INFO
    """

    def __init__(self, level, logger):
        self.logger = logger
        self.level = level

    def __enter__(self):
        self._orig_level = self.logger.level
        self.logger.setLevel(self.level)
        return self.logger

    def __exit__(self, *args):
        self.logger.setLevel(self._orig_level)


def log_level(level=None, logger=None):
    """Change log level of the specified logger (the root logger by default)
    inside a `with` statement. None keeps the current level.

    Usage::
        >>> with log_level(logging.DEBUG) as logger:
        ...     assert logger.level == logging.DEBUG
        ...
        >>> assert logger.level == logging.WARNING
    """
    logger_ = logger if logger is not None else logging.getLogger()
    level_ = level if level is not None else logger_.level
    return LogLevelChanger(level_, logger_)


class Stopwatch(object):
    """Wall-clock timer for with-statements.

    The elapsed seconds are available as `elapsed` after the block exits and
    are logged at DEBUG level with the given label.

    Usage::
        >>> with Stopwatch('nothing') as watch:
        ...     pass
        ...
        >>> watch.elapsed >= 0.0
        True
    """

    def __init__(self, label):
        self.label = label
        self.elapsed = None

    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, *args):
        self.elapsed = time.perf_counter() - self._start
        logging.debug('{label}: {elapsed:.3f} s'.format(
            label=self.label, elapsed=self.elapsed))


def stopwatch(label=''):
    """Measure wall time of a `with` block.
    """
    return Stopwatch(label)
