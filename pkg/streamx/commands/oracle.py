from streamx.commands.command import Command
from streamx.lib.exact_oracle import exact_feedforward_map_error
from streamx.lib.exact_oracle import exact_streaming_error
from streamx.lib.exact_oracle import load_instance


class OracleCommand(Command):
    """Computes exact error probabilities of a tiny instance: the threshold
    decoder for every message and the genie-aided MAP decoder with the full
    and the windowed observation.
    """

    @classmethod
    def supported_options(cls):
        opts = super(OracleCommand, cls).supported_options()
        opts.add('--instance')
        opts.add('--output')
        return opts

    def run_internal(self):
        inst = load_instance(self.required_option('--instance'), self.config.enumeration_limit())
        threshold = exact_streaming_error(inst)

        messages = []
        for k in range(1, inst.config.S + 1):
            messages.append({
                'k': k,
                'threshold_error': threshold[k - 1],
                'map_error': exact_feedforward_map_error(inst, k, False),
                'window_map_error': exact_feedforward_map_error(inst, k, True),
            })

        self.emit({
            'config': inst.config.to_dict(),
            'enumeration_size': inst.enumeration_size,
            'messages': messages,
        }, self.option('--output'))
