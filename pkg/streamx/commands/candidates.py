from streamx.commands.command import Command
from streamx.lib.argument import ArgumentParser


class CandidatesCommand(Command):
    """Prints shell completion candidates, one per line: the public commands
    while none is typed yet, then the options the typed command still accepts.
    """

    @classmethod
    def needs_config(cls):
        return False

    def _typed_line(self):
        # The words after `_candidates` form the line being completed; parse()
        # drops its first word as the script name.
        return ArgumentParser.parse(self.env.argument.commands)

    def candidates(self):
        line = self._typed_line()
        command_class = self.env.table.command_class(line.commands)
        if command_class is None:
            return self.env.table.available_commands(line.commands)

        used = set(self.env.argument.options)
        return sorted(set(command_class.supported_options()) - used)

    def run(self):
        # Completion accepts every option, so validation is skipped.
        self.run_internal()

    def run_internal(self):
        print('\n'.join(self.candidates()))
