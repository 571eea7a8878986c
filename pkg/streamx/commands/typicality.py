from streamx.commands.command import Command
from streamx.lib.channel import Dmc
from streamx.lib.error import ValidationError
from streamx.lib.i18n import _
from streamx.lib.typicality import TypicalityParams
from streamx.lib.typicality import gamma_prime
from streamx.lib.typicality import pinsker_gap_check
from streamx.lib.typicality import sample_coverage


class TypicalityCommand(Command):
    """Samples outputs of the auxiliary channel V for a constant input
    sequence and reports the typical fraction against its lower bound, the
    likelihood-ratio floor violations against W and the Pinsker check.
    """

    @classmethod
    def supported_options(cls):
        opts = super(TypicalityCommand, cls).supported_options()
        opts.add('--v')
        opts.add('--w')
        opts.add('--length')
        opts.add('--gamma1')
        opts.add('--gamma2')
        opts.add('--samples')
        opts.add('--seed')
        opts.add('--symbol')
        opts.add('--output')
        return opts

    def run_internal(self):
        V = Dmc.parse(self.required_option('--v'))
        W = Dmc.parse(self.required_option('--w'))
        length = self.required_option('--length', int)
        params = TypicalityParams(self.required_option('--gamma1', float),
                                  self.required_option('--gamma2', float))
        samples = self.option('--samples', int, self.config.typicality_samples())
        seed = self.option('--seed', int, 0)
        symbol = self.option('--symbol', int, 0)

        if not 0 <= symbol < V.input_size:
            raise ValidationError(_('Input symbol out of range: {symbol}').format(symbol=symbol))
        if length < 1:
            raise ValidationError(_('Length must be positive: {length}').format(length=length))

        report = sample_coverage([symbol] * length, V, W, params, samples, seed)
        variations, divergences, holds = pinsker_gap_check(V, W)

        data = report.to_dict()
        data['gamma_prime'] = gamma_prime(V, W)
        data['pinsker'] = {
            'variations': variations.tolist(),
            'divergences': divergences.tolist(),
            'holds': holds,
        }
        self.emit(data, self.option('--output'))
