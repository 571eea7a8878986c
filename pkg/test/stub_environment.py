class StubEnvironment(object):
    def __init__(self):
        self.cwd = None
        self.table = None
        self.argument = None
        self.config = None
