"""Message catalog of the command line tool. Messages without a translation
fall back to the English source strings.
"""
import gettext
import streamx.lib.path


DOMAIN = 'streamx'

_translation = gettext.translation(
    domain=DOMAIN,
    localedir=streamx.lib.path.locale(),
    fallback=True)

_ = _translation.gettext
ngettext = _translation.ngettext
