import os
from streamx.lib.error import StreamxError


PROJECT_CONFIG = 'streamx.cfg'
DATA_DIR = 'streamx_data'
USER_CONFIG = '.streamx'
LOCALE_DIR = os.path.join(DATA_DIR, 'locale')
DEFAULT_CONFIG = os.path.join(DATA_DIR, 'default.cfg')


def streamx_root():
    """Returns a path for the streamx root directory.
    """
    script_dir = os.path.dirname(os.path.abspath(__file__))
    return os.path.normpath(os.path.join(script_dir, '..', '..'))


def project_root(cwd):
    """Returns a path for the nearest directory holding streamx.cfg, searching
    from cwd upward. Returns None when no such directory exists.
    """
    current = cwd
    while not os.path.exists(os.path.join(current, PROJECT_CONFIG)):
        before = current
        current = os.path.dirname(current)

        # Break if current seems root.
        if before == current:
            return None

    return current


def project_config(cwd):
    """Returns a path for the project config file (streamx.cfg), or None.
    Unlike the default config, a project config is optional.
    See also: streamx.lib.config.Config#load()
    """
    proj_root = project_root(cwd)
    if proj_root is None:
        return None

    return os.path.join(proj_root, PROJECT_CONFIG)


def user_config():
    """Returns a path for the ~/.streamx that is user config file.
    See also: streamx.lib.config.Config#load()
    """
    home_dir = os.path.expanduser('~')
    user_config = os.path.join(home_dir, USER_CONFIG)

    return user_config if os.path.exists(user_config) else None


def default_config():
    """Returns a path for the default config file.
    Raise a StreamxError if the default config file is not found.
    See also: streamx.lib.config.Config#load()
    """
    path = os.path.join(streamx_root(), DEFAULT_CONFIG)
    if not os.path.exists(path):
        msg = 'Default config file is not found: {path}'.format(path=path)
        raise StreamxError(msg)

    return path


def locale():
    """Returns a path for the locale directory has localized messages.
    Raise a StreamxError if the locale directory is not found.
    """
    locale_dir = os.path.join(streamx_root(), LOCALE_DIR)

    if not os.path.isdir(locale_dir):
        msg = 'Locale directory is not found: {path}'.format(
            path=locale_dir)
        raise StreamxError(msg)

    return locale_dir


def companion(path, ext):
    """Returns a path next to the specified one with its extension replaced.

    Usage::
        >>> companion('out/sweep.csv', '.dat')
        'out/sweep.dat'
    """
    return os.path.splitext(path)[0] + ext
