from streamx.commands.command import Command
from streamx.commands.command import float_list
from streamx.lib.channel import Dmc
from streamx.lib.channel import dispersion
from streamx.lib.exponents import exponent_curve
from streamx.lib.exponents import sp_ratio_probe
from streamx.lib.i18n import _
from streamx.lib.error import ValidationError


class ExponentCommand(Command):
    """Evaluates the sphere-packing or the Haroutunian exponent, or the
    auxiliary channel, at one or more rates (comma-separated). With --rho,
    probes E_SP(C - rho) / rho^2 instead.
    """

    KINDS = ('sp', 'haroutunian', 'aux', 'primal')

    @classmethod
    def supported_options(cls):
        opts = super(ExponentCommand, cls).supported_options()
        opts.add('--channel')
        opts.add('--kind')
        opts.add('--rate')
        opts.add('--rho')
        opts.add('--tol')
        opts.add('--output')
        return opts

    def _probe(self, channel, tol):
        rhos = self.required_option('--rho', float_list)
        nu, _p = dispersion(channel, tol, self.config.dispersion_starts(),
                            self.config.capacity_max_iter())
        ratios = sp_ratio_probe(channel, rhos, tol)
        return {
            'ratios': [{'rho': rho, 'ratio_nats': ratio} for rho, ratio in ratios],
            'reference': 1.0 / (2.0 * nu) if nu > 0.0 else None,
        }

    def run_internal(self):
        channel = Dmc.parse(self.required_option('--channel'))
        tol = self.option('--tol', float, self.config.tolerance())

        if self.env.argument.option('--rho') is not None:
            self.emit(self._probe(channel, tol), self.option('--output'))
            return

        kind = self.option('--kind', str, 'sp')
        if kind not in ExponentCommand.KINDS:
            raise ValidationError(_('Unknown exponent kind: {kind}').format(kind=kind))

        rates = self.required_option('--rate', float_list)
        results = exponent_curve(channel, rates, kind, tol,
                                 self.config.haroutunian_iterations(),
                                 self.config.primal_grid_step())

        data = []
        for rate, result in zip(rates, results):
            entry = result.to_dict()
            entry['rate_bits'] = rate
            data.append(entry)
        self.emit(data, self.option('--output'))
