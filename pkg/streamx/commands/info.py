import logging
from streamx.commands.command import Command
from streamx.lib.channel import Dmc
from streamx.lib.channel import summarize
from streamx.lib.i18n import _


class InfoCommand(Command):
    """Prints capacity, dispersion and output symmetry of a channel.
    """

    @classmethod
    def supported_options(cls):
        opts = super(InfoCommand, cls).supported_options()
        opts.add('--channel')
        opts.add('--tol')
        opts.add('--output')
        return opts

    def run_internal(self):
        channel = Dmc.parse(self.required_option('--channel'))
        tol = self.option('--tol', float, self.config.tolerance())

        logging.debug(_('Summarizing {channel}').format(channel=channel))
        summary = summarize(channel, tol, self.config.dispersion_starts(),
                            self.config.capacity_max_iter())

        data = summary.to_dict()
        data['channel'] = channel.to_dict()
        self.emit(data, self.option('--output'))
