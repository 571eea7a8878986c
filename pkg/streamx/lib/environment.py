class Environment(object):
    """Environment class that has runtime information.
    """

    def __init__(self, cwd, argument, table, config=None):
        """Creates an environment by the cwd path, the Argument instance, the
        command table and an optional preloaded Config.
        """
        self.cwd = cwd
        self.argument = argument
        self.table = table
        self.config = config
