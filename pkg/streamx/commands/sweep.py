import logging
from streamx.commands.command import Command
from streamx.lib.experiments import load_schedule
from streamx.lib.experiments import run_sweep
from streamx.lib.i18n import ngettext


class SweepCommand(Command):
    """Runs a sweep schedule and writes one CSV row per (n, T) point.
    """

    @classmethod
    def supported_options(cls):
        opts = super(SweepCommand, cls).supported_options()
        opts.add('--schedule')
        opts.add('--output')
        opts.add('--threads')
        opts.add('--resume')
        opts.add('--gnuplot')
        return opts

    def run_internal(self):
        schedule = load_schedule(self.required_option('--schedule'))
        output = self.option('--output', str, schedule.output)
        threads = self.option('--threads', int, self.config.threads())

        records = run_sweep(schedule, threads, self.config.chunk_size(),
                            self.config.search_limit(), self.flag('--resume'),
                            self.flag('--gnuplot'), output, self.config.tolerance())
        total = len(schedule.points())
        logging.info(ngettext('{count} of {total} point in {path}',
                              '{count} of {total} points in {path}', total).format(
            count=len(records), total=total, path=output))
