class StreamxError(Exception):
    """Base class for error in streamx."""

    """Process exit code reported by the command line tool."""
    EXIT_CODE = 1

    def __init__(self, message):
        """Creates a local error of streamx by the specified message.
        """
        super(StreamxError, self).__init__(message)
        self._message = message

    @property
    def message(self):
        return self._message

    def __str__(self):
        return self.message


class InvalidOptionError(StreamxError):
    """Raised when detecting invalid options."""

    def __init__(self, options):
        """Creates an invalid option error by the invalid option names.
        """
        self._options = options
        message = 'Invalid option: {options}'.format(
            options=', '.join(sorted(self._options)))
        super(InvalidOptionError, self).__init__(message)

    @property
    def options(self):
        """Returns invalid options of the error cause.
        """
        return self._options


class ValidationError(StreamxError):
    """Raised when a channel, a distribution or a configuration is malformed,
    or when a precondition of an operation does not hold."""

    EXIT_CODE = 2


class ConvergenceError(StreamxError):
    """Raised when a numerical solver stops before reaching its tolerance."""

    EXIT_CODE = 3

    def __init__(self, message, gap=None):
        """Creates a convergence error with the last achieved gap.
        The gap may be a number or a bracketing interval.
        """
        self._gap = gap
        if gap is not None:
            message = '{message} (gap: {gap})'.format(message=message, gap=gap)
        super(ConvergenceError, self).__init__(message)

    @property
    def gap(self):
        return self._gap


class StreamxIOError(StreamxError):
    """Raised when a file cannot be read or written."""

    EXIT_CODE = 4
