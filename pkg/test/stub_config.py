# Small settings so that command tests run in well under a second.
class StubConfig(object):
    def __init__(self):
        pass

    def tolerance(self):
        return StubConfig.TOLERANCE

    def capacity_max_iter(self):
        return StubConfig.CAPACITY_MAX_ITER

    def haroutunian_iterations(self):
        return StubConfig.HAROUTUNIAN_ITERATIONS

    def primal_grid_step(self):
        return StubConfig.PRIMAL_GRID_STEP

    def dispersion_starts(self):
        return StubConfig.DISPERSION_STARTS

    def search_limit(self):
        return StubConfig.SEARCH_LIMIT

    def threads(self):
        return StubConfig.THREADS

    def chunk_size(self):
        return StubConfig.CHUNK_SIZE

    def enumeration_limit(self):
        return StubConfig.ENUMERATION_LIMIT

    def typicality_samples(self):
        return StubConfig.TYPICALITY_SAMPLES


StubConfig.TOLERANCE = 1e-9
StubConfig.CAPACITY_MAX_ITER = 100000
StubConfig.HAROUTUNIAN_ITERATIONS = 500
StubConfig.PRIMAL_GRID_STEP = 0.05
StubConfig.DISPERSION_STARTS = 2
StubConfig.SEARCH_LIMIT = 10 ** 6
StubConfig.THREADS = 1
StubConfig.CHUNK_SIZE = 50
StubConfig.ENUMERATION_LIMIT = 10 ** 6
StubConfig.TYPICALITY_SAMPLES = 200
