import csv
import logging
from streamx.commands.command import Command
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError
from streamx.lib.i18n import _
from streamx.lib.i18n import ngettext
from streamx.lib.logutil import stopwatch
from streamx.lib.path import companion
from streamx.lib.streaming_codec import SUMMARY_COLUMNS
from streamx.lib.streaming_codec import estimate_errors
from streamx.lib.streaming_codec import load_config


class SimulateCommand(Command):
    """Estimates the per-message error probabilities of a streaming code by
    Monte Carlo. The summary goes to --output as CSV (or to stdout as
    JSON); --records also writes one JSON line per trial next to it.
    """

    DEFAULT_TRIALS = 1000

    @classmethod
    def supported_options(cls):
        opts = super(SimulateCommand, cls).supported_options()
        opts.add('--config')
        opts.add('--trials')
        opts.add('--threads')
        opts.add('--output')
        opts.add('--records')
        return opts

    def _write_summary(self, estimate, path):
        try:
            with open(path, 'w', newline='') as f:
                writer = csv.writer(f)
                writer.writerow(SUMMARY_COLUMNS)
                for row in estimate.rows():
                    writer.writerow(row)
        except IOError as e:
            raise StreamxIOError(_('Cannot write {path}: {err}').format(path=path, err=e))
        logging.info(_('Wrote {path}').format(path=path))

    def _estimate(self, config, trials, threads, records_path):
        if records_path is None:
            return estimate_errors(config, trials, threads, self.config.chunk_size())

        try:
            with open(records_path, 'w') as records:
                return estimate_errors(config, trials, threads, self.config.chunk_size(),
                                       records)
        except IOError as e:
            raise StreamxIOError(_('Cannot write {path}: {err}').format(
                path=records_path, err=e))

    def run_internal(self):
        config = load_config(self.required_option('--config'), self.config.search_limit())
        trials = self.option('--trials', int, SimulateCommand.DEFAULT_TRIALS)
        threads = self.option('--threads', int, self.config.threads())
        output = self.option('--output')

        records_path = None
        if self.flag('--records'):
            if output is None:
                raise ValidationError(_('--records needs --output'))
            records_path = companion(output, '.jsonl')

        with stopwatch('simulate') as watch:
            estimate = self._estimate(config, trials, threads, records_path)
        logging.info(ngettext('{trials} trial in {elapsed:.1f} s',
                              '{trials} trials in {elapsed:.1f} s', trials).format(
            trials=trials, elapsed=watch.elapsed))

        if output is None:
            data = estimate.to_dict()
            data['config'] = config.to_dict()
            self.emit(data)
        else:
            self._write_summary(estimate, output)
