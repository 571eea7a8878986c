"""Discrete memoryless channels and their first- and second-order quantities.

All logarithms are to base 2: rates are in bits, variances in bits^2.
"""
import json
import math
import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy
from streamx.lib.error import ConvergenceError
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError


"""Tolerance on row sums of stochastic matrices and probability vectors."""
STOCHASTIC_TOLERANCE = 1e-12

"""Absolute tolerance of float equality in the symmetry test."""
SYMMETRY_TOLERANCE = 1e-12

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITER = 1000000

LN2 = math.log(2.0)


def _as_probabilities(values, name):
    array = np.array(values, dtype=float)
    if array.size == 0 or not np.all(np.isfinite(array)):
        raise ValidationError('{name} must be a nonempty array of finite numbers'.format(
            name=name))
    if np.any(array < 0.0) or np.any(array > 1.0):
        raise ValidationError('{name} has entries outside [0, 1]'.format(name=name))
    array.setflags(write=False)
    return array


class Dmc(object):
    """A discrete memoryless channel W(y|x) stored as an |X| x |Y| row-stochastic
    matrix. Instances are immutable.

    Usage::
        >>> w = Dmc.parse('bsc:0.1')
        >>> w.input_size, w.output_size
        (2, 2)
    """

    def __init__(self, matrix):
        array = _as_probabilities(matrix, 'Channel matrix')
        if array.ndim != 2:
            raise ValidationError('Channel matrix must be two-dimensional')

        sums = array.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > STOCHASTIC_TOLERANCE):
            raise ValidationError('Channel rows must sum to 1: {sums}'.format(
                sums=sums.tolist()))

        self._matrix = array

    @property
    def matrix(self):
        return self._matrix

    @property
    def input_size(self):
        return self._matrix.shape[0]

    @property
    def output_size(self):
        return self._matrix.shape[1]

    def row(self, x):
        return self._matrix[x]

    def __eq__(self, other):
        return (isinstance(other, Dmc)
                and self._matrix.shape == other._matrix.shape
                and bool(np.all(self._matrix == other._matrix)))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self._matrix.tobytes())

    def __repr__(self):
        return 'Dmc({matrix})'.format(matrix=self._matrix.tolist())

    def sample_outputs(self, x_seq, rng):
        """Samples one output per input symbol by inverse-CDF on each row,
        using the specified numpy Generator.
        """
        x_seq = np.asarray(x_seq, dtype=np.intp)
        cdf = np.cumsum(self._matrix, axis=1)
        u = rng.random(x_seq.shape[0])
        y_seq = np.sum(cdf[x_seq] <= u[:, np.newaxis], axis=1)
        return np.minimum(y_seq, self.output_size - 1)

    def to_dict(self):
        return {
            'input_size': self.input_size,
            'output_size': self.output_size,
            'matrix': self._matrix.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        """Creates a channel from the JSON object form
        {"input_size": int, "output_size": int, "matrix": [[...], ...]}.
        """
        try:
            matrix = data['matrix']
            input_size = int(data.get('input_size', len(matrix)))
            output_size = int(data.get('output_size', len(matrix[0])))
        except (KeyError, TypeError, IndexError, ValueError):
            raise ValidationError('Channel JSON needs "matrix" as a list of rows')

        channel = cls(matrix)
        if channel.input_size != input_size or channel.output_size != output_size:
            raise ValidationError('Channel sizes do not match its matrix: {x}x{y}'.format(
                x=input_size, y=output_size))
        return channel

    @classmethod
    def parse(cls, spec):
        """Creates a channel from a builtin constructor string such as
        "bsc:0.11", "bec:0.5", "zchan:0.3", "identity:4", or from a path to a
        channel JSON file.
        """
        name, _, arg = spec.partition(':')
        constructor = BUILTIN_CHANNELS.get(name.lower())
        if constructor is None:
            return load_channel(spec)

        try:
            value = int(arg) if name.lower() == 'identity' else float(arg)
        except ValueError:
            raise ValidationError('Invalid channel parameter: {spec}'.format(spec=spec))
        return constructor(value)


def bsc(p):
    """Binary symmetric channel with crossover probability p.
    """
    return Dmc([[1.0 - p, p], [p, 1.0 - p]])


def bec(e):
    """Binary erasure channel with erasure probability e.
    Outputs are ordered (0, 1, erasure).
    """
    return Dmc([[1.0 - e, 0.0, e], [0.0, 1.0 - e, e]])


def zchan(q):
    """Z-channel: input 0 is received noiselessly, input 1 flips to 0 with
    probability q.
    """
    return Dmc([[1.0, 0.0], [q, 1.0 - q]])


def identity(k):
    """Noiseless channel on k symbols.
    """
    if k < 1:
        raise ValidationError('Identity channel needs k >= 1')
    return Dmc(np.eye(k))


BUILTIN_CHANNELS = {
    'bsc': bsc,
    'bec': bec,
    'zchan': zchan,
    'identity': identity,
}


def load_channel(path):
    try:
        with open(path) as fp:
            data = json.load(fp)
    except IOError as e:
        raise StreamxIOError('Cannot read channel file: {path} ({reason})'.format(
            path=path, reason=e))
    except ValueError as e:
        raise ValidationError('Malformed channel file: {path} ({reason})'.format(
            path=path, reason=e))

    return Dmc.from_dict(data)


def save_channel(channel, path):
    try:
        with open(path, 'w') as fp:
            json.dump(channel.to_dict(), fp)
    except IOError as e:
        raise StreamxIOError('Cannot write channel file: {path} ({reason})'.format(
            path=path, reason=e))


class InputDistribution(object):
    """A probability vector P on the input alphabet. Immutable.
    """

    def __init__(self, probs):
        array = _as_probabilities(probs, 'Input distribution')
        if array.ndim != 1:
            raise ValidationError('Input distribution must be one-dimensional')
        if abs(array.sum() - 1.0) > STOCHASTIC_TOLERANCE:
            raise ValidationError('Input distribution must sum to 1: {total}'.format(
                total=array.sum()))
        self._probs = array

    @property
    def probs(self):
        return self._probs

    @property
    def size(self):
        return self._probs.shape[0]

    def __eq__(self, other):
        return (isinstance(other, InputDistribution)
                and self._probs.shape == other._probs.shape
                and bool(np.all(self._probs == other._probs)))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self._probs.tobytes())

    def __repr__(self):
        return 'InputDistribution({probs})'.format(probs=self._probs.tolist())

    @classmethod
    def uniform(cls, size):
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def from_vector(cls, vector):
        """Creates a distribution from a nonnegative vector that sums to 1 up to
        rounding; the vector is clipped and renormalized.
        """
        array = np.clip(np.asarray(vector, dtype=float), 0.0, None)
        return cls(array / array.sum())


class ChannelSummary(object):
    """Capacity, a capacity-achieving input, the dispersion and the output
    symmetry flag of a channel.
    """

    def __init__(self, capacity_bits, capacity_input, dispersion_bits2,
                 output_symmetric, solver_tolerance):
        self.capacity_bits = capacity_bits
        self.capacity_input = capacity_input
        self.dispersion_bits2 = dispersion_bits2
        self.output_symmetric = output_symmetric
        self.solver_tolerance = solver_tolerance

    def to_dict(self):
        return {
            'capacity_bits': self.capacity_bits,
            'capacity_input': self.capacity_input.probs.tolist(),
            'dispersion_bits2': self.dispersion_bits2,
            'output_symmetric': self.output_symmetric,
            'solver_tolerance': self.solver_tolerance,
        }


def _check_compatible(P, W):
    if P.size != W.input_size:
        raise ValidationError('Input distribution has {p} entries but the channel has {x} inputs'.format(
            p=P.size, x=W.input_size))


def output_distribution(P, W):
    """Returns PW(y) = sum_x P(x) W(y|x).
    """
    _check_compatible(P, W)
    return P.probs.dot(W.matrix)


def information_density_matrix(P, W):
    """Returns the |X| x |Y| matrix of i(x;y) = log2 W(y|x)/PW(y).
    Entries with W(y|x) = 0 < PW(y) are -inf; entries with PW(y) = 0 are nan.
    """
    q = output_distribution(P, W)
    with np.errstate(divide='ignore', invalid='ignore'):
        density = np.log2(W.matrix) - np.log2(q)[np.newaxis, :]
    density[:, q == 0.0] = np.nan
    return density


def empirical_type(x_seq, size):
    """Returns the type of a sequence, i.e. the relative frequency of each
    symbol, as an InputDistribution.

    Usage::
        >>> empirical_type([0, 1, 1, 1], 2).probs.tolist()
        [0.25, 0.75]
    """
    x_seq = np.asarray(x_seq, dtype=np.intp)
    if x_seq.size == 0:
        raise ValidationError('Type of an empty sequence is undefined')
    counts = np.bincount(x_seq, minlength=size)
    if counts.shape[0] != size:
        raise ValidationError('Sequence has symbols outside an alphabet of size {size}'.format(
            size=size))
    return InputDistribution(counts / float(x_seq.size))


def _check_symbols(seq, size, name):
    seq = np.asarray(seq, dtype=np.intp)
    if seq.ndim != 1:
        raise ValidationError('{name} must be one-dimensional'.format(name=name))
    if np.any(seq < 0) or np.any(seq >= size):
        raise ValidationError('{name} has symbols outside an alphabet of size {size}'.format(
            name=name, size=size))
    return seq


def information_density(P, W, x_seq, y_seq):
    """Returns i(x^l;y^l) = sum_j log2 W(y_j|x_j)/PW(y_j) in bits, or -inf when
    some W(y_j|x_j) = 0.

    Usage::
        >>> round(information_density(InputDistribution.uniform(2), bsc(0.1), [0], [0]), 4)
        0.848
    """
    _check_compatible(P, W)
    x_seq = _check_symbols(x_seq, W.input_size, 'Input sequence')
    y_seq = _check_symbols(y_seq, W.output_size, 'Output sequence')
    if x_seq.size == 0 or x_seq.size != y_seq.size:
        raise ValidationError('Sequences must be nonempty and of equal length')

    density = information_density_matrix(P, W)
    terms = density[x_seq, y_seq]
    if np.any(np.isnan(terms)):
        raise ValidationError('Observed an output that is impossible under the input distribution')
    return float(np.sum(terms))


def mutual_information(P, W):
    """Returns I(P,W) in bits with the convention 0 log 0 = 0.
    """
    joint = P.probs[:, np.newaxis] * W.matrix
    q = output_distribution(P, W)
    product = P.probs[:, np.newaxis] * q[np.newaxis, :]
    with np.errstate(divide='ignore', invalid='ignore'):
        terms = xlogy(joint, joint) - xlogy(joint, product)
    return max(0.0, float(np.sum(terms)) / LN2)


def information_variances(P, W):
    """Returns the unconditional and the conditional information variances
    (U, V) in bits^2.
    """
    density = information_density_matrix(P, W)
    joint = P.probs[:, np.newaxis] * W.matrix
    support = joint > 0.0
    values = np.where(support, density, 0.0)

    mean = np.sum(joint * values)
    unconditional = np.sum(joint * (values - mean) ** 2)

    row_means = np.sum(W.matrix * values, axis=1)
    row_vars = np.sum(W.matrix * (values - row_means[:, np.newaxis]) ** 2, axis=1)
    conditional = np.sum(P.probs * row_vars)
    return (max(0.0, float(unconditional)), max(0.0, float(conditional)))


def kl_row(V, W, x):
    """Returns D(V(.|x) || W(.|x)) in bits, or +inf when V(.|x) is not
    absolutely continuous with respect to W(.|x).
    """
    _check_same_alphabets(V, W)
    v = V.row(x)
    w = W.row(x)
    if np.any((v > 0.0) & (w == 0.0)):
        return math.inf
    mask = v > 0.0
    return max(0.0, float(np.sum(v[mask] * np.log2(v[mask] / w[mask]))))


def kl_rows(V, W):
    """Returns the vector of D(V(.|x) || W(.|x)) over every input x.
    """
    return np.array([kl_row(V, W, x) for x in range(V.input_size)])


def conditional_kl(V, W, P):
    """Returns D(V||W|P) = sum_x P(x) D(V(.|x) || W(.|x)) in bits.
    Rows outside the support of P do not contribute.
    """
    _check_same_alphabets(V, W)
    _check_compatible(P, V)
    total = 0.0
    for x in range(V.input_size):
        if P.probs[x] > 0.0:
            total += P.probs[x] * kl_row(V, W, x)
    return total


def _check_same_alphabets(V, W):
    if V.matrix.shape != W.matrix.shape:
        raise ValidationError('Channels have different alphabets: {v} and {w}'.format(
            v=V.matrix.shape, w=W.matrix.shape))


def _row_divergences_to_output(matrix, q):
    with np.errstate(divide='ignore', invalid='ignore'):
        terms = xlogy(matrix, matrix) - xlogy(matrix, q[np.newaxis, :])
    return np.sum(terms, axis=1) / LN2


def blahut_arimoto(matrix, tol=DEFAULT_TOLERANCE, max_iter=DEFAULT_MAX_ITER, initial=None):
    """Alternating maximization for the capacity of a row-stochastic matrix.

    Returns (capacity, input, gap) where gap is the difference between the
    upper bound max_x D(W(.|x)||PW) and the lower bound I(P,W). Stops when the
    gap is at most tol; raises ConvergenceError after max_iter iterations.
    """
    size = matrix.shape[0]
    p = np.full(size, 1.0 / size) if initial is None else np.array(initial, dtype=float)
    gap = math.inf

    for _ in range(max_iter):
        q = p.dot(matrix)
        divergences = _row_divergences_to_output(matrix, q)
        lower = float(np.dot(p, divergences))
        upper = float(np.max(divergences))
        gap = upper - lower
        if gap <= tol:
            return (max(0.0, lower), p, gap)

        weights = p * np.exp2(divergences - upper)
        p = weights / weights.sum()

    raise ConvergenceError('Capacity solver did not converge in {n} iterations'.format(
        n=max_iter), gap)


def capacity(W, tol=DEFAULT_TOLERANCE, max_iter=DEFAULT_MAX_ITER):
    """Returns (C, P_star): the capacity in bits and an input that achieves it
    within tol.

    Usage::
        >>> c, p = capacity(bsc(0.5))
        >>> c
        0.0
    """
    if tol <= 0.0:
        raise ValidationError('Tolerance must be positive')
    value, p, _ = blahut_arimoto(W.matrix, tol, max_iter)
    return (value, InputDistribution.from_vector(p))


def _groups_by_sorted_column(matrix):
    groups = []
    for y in range(matrix.shape[1]):
        column = np.sort(matrix[:, y])
        for group in groups:
            if np.allclose(group[0], column, rtol=0.0, atol=SYMMETRY_TOLERANCE):
                group[1].append(y)
                break
        else:
            groups.append((column, [y]))
    return [members for _, members in groups]


def _mutually_permuted(vectors):
    reference = np.sort(vectors[0])
    return all(np.allclose(np.sort(v), reference, rtol=0.0, atol=SYMMETRY_TOLERANCE)
               for v in vectors[1:])


def output_symmetry(W):
    """Tests Gallager's output symmetry: outputs partition into groups whose
    submatrices have mutually permuted rows and mutually permuted columns.

    Returns (symmetric, partition) where partition lists output symbols per
    group, or is None when the test fails.

    Usage::
        >>> output_symmetry(bec(0.5))
        (True, [[0, 1], [2]])
        >>> output_symmetry(zchan(0.3))
        (False, None)
    """
    partition = _groups_by_sorted_column(W.matrix)
    for group in partition:
        sub = W.matrix[:, group]
        if not _mutually_permuted(list(sub)):
            return (False, None)
        if not _mutually_permuted(list(sub.T)):
            return (False, None)
    return (True, partition)


def dispersion(W, tol=DEFAULT_TOLERANCE, starts=8, max_iter=DEFAULT_MAX_ITER, seed=0):
    """Returns (nu, P) where nu is the minimum conditional information variance
    over inputs within tol of capacity, and P achieves it.

    Output-symmetric channels are evaluated at the uniform input. Otherwise
    V(P,W) is minimized over {P : I(P,W) >= C - tol} from the capacity solver's
    input and `starts` random starting points.
    """
    c, p_star = capacity(W, tol, max_iter)
    symmetric, _ = output_symmetry(W)
    if symmetric:
        uniform = InputDistribution.uniform(W.input_size)
        return (information_variances(uniform, W)[1], uniform)

    best_p = p_star
    best_value = information_variances(p_star, W)[1]
    if W.input_size == 1:
        return (best_value, best_p)

    def objective(vector):
        return information_variances(InputDistribution.from_vector(vector), W)[1]

    constraints = [
        {'type': 'eq', 'fun': lambda v: np.sum(v) - 1.0},
        {'type': 'ineq',
         'fun': lambda v: mutual_information(InputDistribution.from_vector(v), W) - (c - tol)},
    ]
    bounds = [(0.0, 1.0)] * W.input_size

    rng = np.random.default_rng(seed)
    candidates = [p_star.probs] + [
        0.5 * p_star.probs + 0.5 * rng.dirichlet(np.ones(W.input_size))
        for _ in range(starts)]

    for start in candidates:
        result = minimize(objective, start, method='SLSQP', bounds=bounds,
                          constraints=constraints, options={'ftol': 1e-14, 'maxiter': 500})
        candidate = InputDistribution.from_vector(result.x)
        if mutual_information(candidate, W) < c - tol:
            continue
        value = information_variances(candidate, W)[1]
        if value < best_value:
            best_value = value
            best_p = candidate

    return (best_value, best_p)


def summarize(W, tol=DEFAULT_TOLERANCE, starts=8, max_iter=DEFAULT_MAX_ITER):
    """Returns a ChannelSummary of the channel.
    """
    c, p_star = capacity(W, tol, max_iter)
    nu, _ = dispersion(W, tol, starts, max_iter)
    symmetric, _ = output_symmetry(W)
    return ChannelSummary(c, p_star, nu, symmetric, tol)
