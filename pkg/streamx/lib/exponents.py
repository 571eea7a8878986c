"""Sphere-packing and Haroutunian error exponents of a DMC.

Exponent values are in bits. The asymptotic ratio probes report exponents in
nats, so that a rate backoff in bits and a dispersion in bits^2 give the
constant 1/(2 nu).
"""
import itertools
import logging
import math
import numpy as np
from scipy.optimize import minimize
from scipy.optimize import minimize_scalar
from scipy.special import xlogy
from streamx.lib.channel import DEFAULT_TOLERANCE
from streamx.lib.channel import Dmc
from streamx.lib.channel import InputDistribution
from streamx.lib.channel import LN2
from streamx.lib.channel import blahut_arimoto
from streamx.lib.channel import capacity
from streamx.lib.channel import conditional_kl
from streamx.lib.channel import kl_rows
from streamx.lib.channel import mutual_information
from streamx.lib.channel import output_symmetry
from streamx.lib.error import ConvergenceError
from streamx.lib.error import ValidationError


PRIMAL_GRID = 'primal_grid'
DUAL_GALLAGER = 'dual_gallager'
SYMMETRIC_1D = 'symmetric_1d'
PROJECTED_SUBGRADIENT = 'projected_subgradient'

"""Largest tilting parameter tried before declaring the exponent unbounded."""
RHO_MAX = 2.0 ** 20

DEFAULT_ITERATIONS = 10000
DEFAULT_GRID_STEP = 0.005

"""Iterations without improvement after which the subgradient method stops."""
PATIENCE = 500


class RatePoint(object):
    """A rate in bits per channel use.
    """

    def __init__(self, rate_bits):
        rate_bits = float(rate_bits)
        if not rate_bits >= 0.0:
            raise ValidationError('Rate must be nonnegative: {rate}'.format(rate=rate_bits))
        self.rate_bits = rate_bits

    def __repr__(self):
        return 'RatePoint({rate})'.format(rate=self.rate_bits)


def _rate(R):
    return R if isinstance(R, RatePoint) else RatePoint(R)


class ExponentResult(object):
    """The value of an exponent with the channel (and input) that attain it.
    """

    def __init__(self, value_bits, optimizing_channel, optimizing_input, method, gap_estimate):
        self.value_bits = max(0.0, value_bits)
        self.optimizing_channel = optimizing_channel
        self.optimizing_input = optimizing_input
        self.method = method
        self.gap_estimate = max(0.0, gap_estimate)

    def to_dict(self):
        return {
            'value_bits': self.value_bits,
            'optimizing_channel': self.optimizing_channel.matrix.tolist(),
            'optimizing_input': (None if self.optimizing_input is None
                                 else self.optimizing_input.probs.tolist()),
            'method': self.method,
            'gap_estimate': self.gap_estimate,
        }


def gallager_e0(W, rho, P):
    """Returns Gallager's E0(rho, P) = -log2 sum_y (sum_x P(x) W(y|x)^(1/(1+rho)))^(1+rho).
    """
    s = 1.0 / (1.0 + rho)
    beta = P.probs.dot(np.power(W.matrix, s))
    return -math.log2(float(np.sum(np.power(beta, 1.0 + rho))))


def max_gallager_e0(W, rho, symmetric=None):
    """Returns (max_P E0(rho, P), P). The maximization minimizes the convex
    function sum_y beta_y^(1+rho) over the input simplex.
    """
    if symmetric is None:
        symmetric = output_symmetry(W)[0]
    uniform = InputDistribution.uniform(W.input_size)
    if symmetric or W.input_size == 1:
        return (gallager_e0(W, rho, uniform), uniform)

    s = 1.0 / (1.0 + rho)
    powered = np.power(W.matrix, s)

    def objective(p):
        beta = p.dot(powered)
        return float(np.sum(np.power(beta, 1.0 + rho)))

    def gradient(p):
        beta = p.dot(powered)
        return (1.0 + rho) * powered.dot(np.power(beta, rho))

    result = minimize(objective, uniform.probs, jac=gradient, method='SLSQP',
                      bounds=[(0.0, 1.0)] * W.input_size,
                      constraints=[{'type': 'eq', 'fun': lambda p: np.sum(p) - 1.0,
                                    'jac': lambda p: np.ones_like(p)}],
                      options={'ftol': 1e-15, 'maxiter': 500})
    best = InputDistribution.from_vector(result.x)
    value = gallager_e0(W, rho, best)
    uniform_value = gallager_e0(W, rho, uniform)
    if uniform_value > value:
        return (uniform_value, uniform)
    return (value, best)


def tilted_channel(W, P, rho):
    """Returns the channel V(y|x) proportional to W(y|x)^(1/(1+rho)) beta(y)^rho,
    beta(y) = sum_x P(x) W(y|x)^(1/(1+rho)), which attains the sphere-packing
    bound at the rate I(P, V) when P maximizes E0(rho, .).
    """
    s = 1.0 / (1.0 + rho)
    powered = np.power(W.matrix, s)
    beta = P.probs.dot(powered)
    weights = powered * np.power(beta, rho)[np.newaxis, :]
    return Dmc(weights / weights.sum(axis=1)[:, np.newaxis])


def _bracket_rho(objective):
    hi = 1.0
    while objective(2.0 * hi) > objective(hi):
        hi *= 2.0
        if hi > RHO_MAX:
            raise ConvergenceError(
                'Sphere-packing dual is unbounded; the rate is below the zero-rate limit',
                (hi, 2.0 * hi))
    return 2.0 * hi


def sphere_packing_exponent(W, R, tol=DEFAULT_TOLERANCE, symmetric=None):
    """Returns E_SP(R) = max_P min_{V: I(P,V) <= R} D(V||W|P) computed through
    the Gallager dual sup_{rho >= 0} [E0(rho) - rho R], with the tilted channel
    at the optimal rho as the optimizing channel.

    Usage::
        >>> from streamx.lib.channel import bsc
        >>> round(sphere_packing_exponent(bsc(0.11), 0.4).value_bits, 4)
        0.0089
    """
    if tol <= 0.0:
        raise ValidationError('Tolerance must be positive')
    rate = _rate(R).rate_bits
    c, p_star = capacity(W, tol)
    if rate >= c:
        return ExponentResult(0.0, W, p_star, DUAL_GALLAGER, 0.0)

    if symmetric is None:
        symmetric = output_symmetry(W)[0]

    def dual(rho):
        return max_gallager_e0(W, rho, symmetric)[0] - rho * rate

    upper = _bracket_rho(dual)
    result = minimize_scalar(lambda rho: -dual(rho), bounds=(0.0, upper), method='bounded',
                             options={'xatol': min(tol, 1e-10) * max(1.0, upper)})
    if not result.success:
        raise ConvergenceError('Line search over rho did not converge', (0.0, upper))

    rho = float(result.x)
    value = max(0.0, -float(result.fun))
    p = max_gallager_e0(W, rho, symmetric)[1]
    v = tilted_channel(W, p, rho)

    primal = conditional_kl(v, W, p)
    excess = max(0.0, mutual_information(p, v) - rate)
    gap = abs(primal - value) + excess
    logging.debug('E_SP({rate}) = {value} at rho = {rho}, gap {gap}'.format(
        rate=rate, value=value, rho=rho, gap=gap))
    return ExponentResult(value, v, p, DUAL_GALLAGER, gap)


def _simplex_grid(size, step):
    divisions = int(round(1.0 / step))
    for counts in itertools.product(range(divisions + 1), repeat=size - 1):
        last = divisions - sum(counts)
        if last < 0:
            continue
        yield np.array(list(counts) + [last], dtype=float) / divisions


def _common_row(W, rows):
    support = np.all(W.matrix[rows] > 0.0, axis=0)
    if not np.any(support):
        return None
    weights = np.where(support, W.matrix[rows].sum(axis=0), 0.0)
    return weights / weights.sum()


def _restricted_min_divergence(W, P, rate):
    """Returns min D(V||W|P) over V with I(P,V) <= rate, for a fixed input P.
    """
    if mutual_information(P, W) <= rate:
        return (0.0, W)

    rows = np.flatnonzero(P.probs > 0.0)
    common = _common_row(W, rows)
    if common is None:
        return (math.inf, W)

    target = W.matrix.copy()
    target[rows] = common

    def info_at(a):
        return mutual_information(P, Dmc((1.0 - a) * W.matrix + a * target))

    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if info_at(mid) > rate:
            lo = mid
        else:
            hi = mid
    start = ((1.0 - hi) * W.matrix + hi * target)[rows]

    p = P.probs[rows]
    w = W.matrix[rows]
    shape = w.shape
    fixed_zero = (w == 0.0).ravel()
    bounds = [(0.0, 0.0) if zero else (0.0, 1.0) for zero in fixed_zero]

    def unpack(vector):
        return np.clip(vector, 0.0, 1.0).reshape(shape)

    def divergence(vector):
        v = unpack(vector)
        return float(np.sum(p[:, np.newaxis] * (xlogy(v, v) - xlogy(v, np.where(w > 0.0, w, 1.0))))) / LN2

    def divergence_grad(vector):
        v = np.maximum(unpack(vector), 1e-300)
        grad = p[:, np.newaxis] * (np.log2(v / np.where(w > 0.0, w, 1.0)) + 1.0 / LN2)
        return np.where(w > 0.0, grad, 0.0).ravel()

    def slack(vector):
        v = unpack(vector)
        q = p.dot(v)
        joint = p[:, np.newaxis] * v
        info = float(np.sum(xlogy(joint, v) - xlogy(joint, q[np.newaxis, :]))) / LN2
        return rate - info

    def slack_grad(vector):
        v = np.maximum(unpack(vector), 1e-300)
        q = p.dot(v)
        return (-p[:, np.newaxis] * np.log2(v / q[np.newaxis, :])).ravel()

    constraints = [
        {'type': 'eq', 'fun': lambda vec: unpack(vec).sum(axis=1) - 1.0},
        {'type': 'ineq', 'fun': slack, 'jac': slack_grad},
    ]
    result = minimize(divergence, start.ravel(), jac=divergence_grad, method='SLSQP',
                      bounds=bounds, constraints=constraints,
                      options={'ftol': 1e-13, 'maxiter': 1000})

    v_rows = unpack(result.x)
    v_rows = v_rows / v_rows.sum(axis=1)[:, np.newaxis]
    full = W.matrix.copy()
    full[rows] = v_rows
    candidate = Dmc(full)
    fallback = Dmc((1.0 - hi) * W.matrix + hi * target)

    candidate_value = conditional_kl(candidate, W, P)
    fallback_value = conditional_kl(fallback, W, P)
    if mutual_information(P, candidate) <= rate + 1e-9 and candidate_value <= fallback_value:
        return (candidate_value, candidate)
    return (fallback_value, fallback)


def primal_sphere_packing(W, R, grid_step=DEFAULT_GRID_STEP, tol=DEFAULT_TOLERANCE):
    """Evaluates the sphere-packing exponent from its primal definition: the
    outer maximum over a grid on the input simplex with the given step, the
    inner convex minimum solved per grid point. Serves as an oracle for the
    dual solver.
    """
    rate = _rate(R).rate_bits
    c, p_star = capacity(W, tol)
    if rate >= c:
        return ExponentResult(0.0, W, p_star, PRIMAL_GRID, 0.0)

    best = (-1.0, None, None)
    for vector in _simplex_grid(W.input_size, grid_step):
        P = InputDistribution.from_vector(vector)
        value, v = _restricted_min_divergence(W, P, rate)
        if value > best[0]:
            best = (value, v, P)

    value, v, P = best
    if math.isinf(value):
        raise ConvergenceError('Primal sphere-packing exponent is unbounded at this rate')
    return ExponentResult(value, v, P, PRIMAL_GRID, grid_step)


def _capacity_at_most(matrix, rate, tol, initial=None, max_iter=100000):
    """Decides whether the capacity of matrix is at most rate + tol, stopping
    Blahut-Arimoto as soon as either bound settles the question.
    Returns (feasible, input).
    """
    size = matrix.shape[0]
    p = np.full(size, 1.0 / size) if initial is None else initial
    for _ in range(max_iter):
        q = p.dot(matrix)
        with np.errstate(divide='ignore', invalid='ignore'):
            terms = xlogy(matrix, matrix) - xlogy(matrix, q[np.newaxis, :])
        divergences = np.sum(terms, axis=1) / LN2
        lower = float(np.dot(p, divergences))
        upper = float(np.max(divergences))
        if upper <= rate + tol:
            return (True, p)
        if lower > rate:
            return (False, p)
        weights = p * np.exp2(divergences - upper)
        p = weights / weights.sum()
    return (False, p)


def _project_to_simplex(vector, support):
    """Euclidean projection of vector onto the probability simplex restricted to
    the entries flagged in support.
    """
    result = np.zeros_like(vector)
    values = vector[support]
    ordered = np.sort(values)[::-1]
    cumulative = np.cumsum(ordered) - 1.0
    indices = np.arange(1, values.size + 1)
    last = indices[ordered - cumulative / indices > 0][-1]
    theta = cumulative[last - 1] / last
    result[support] = np.maximum(values - theta, 0.0)
    return result


def _symmetric_reduction(W, rate, tol):
    """Solves the Haroutunian exponent of an output-symmetric channel along the
    one-parameter family of tilted channels at the uniform input, on which
    capacity equals I(uniform, V).
    """
    uniform = InputDistribution.uniform(W.input_size)

    def rate_at(rho):
        return mutual_information(uniform, tilted_channel(W, uniform, rho))

    lo, hi = 0.0, 1.0
    while rate_at(hi) > rate:
        lo = hi
        hi *= 2.0
        if hi > RHO_MAX:
            raise ConvergenceError('No channel in the tilted family has capacity below the rate',
                                   (lo, hi))

    for _ in range(200):
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if rate_at(mid) > rate:
            lo = mid
        else:
            hi = mid

    v = tilted_channel(W, uniform, hi)
    value = float(np.max(kl_rows(v, W)))
    inner = float(np.max(kl_rows(tilted_channel(W, uniform, lo), W)))
    return ExponentResult(value, v, uniform, SYMMETRIC_1D, abs(value - inner))


def _zero_rate_anchor(W):
    common = _common_row(W, np.arange(W.input_size))
    if common is None:
        return None
    return np.tile(common, (W.input_size, 1))


def _restore_feasibility(anchor, matrix, rate, tol, p):
    feasible, p = _capacity_at_most(matrix, rate, tol, p)
    if feasible:
        return (matrix, p)
    lo, hi = 0.0, 1.0
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        candidate = anchor + mid * (matrix - anchor)
        ok, p_mid = _capacity_at_most(candidate, rate, tol, p)
        if ok:
            lo = mid
            p = p_mid
        else:
            hi = mid
    return (anchor + lo * (matrix - anchor), p)


def haroutunian_exponent(W, R, tol=DEFAULT_TOLERANCE, iterations=DEFAULT_ITERATIONS):
    """Returns E+(R) = min_{V: C(V) <= R} max_x D(V(.|x)||W(.|x)).

    Output-symmetric channels use the one-dimensional tilted family. Other
    channels run a projected subgradient method on the worst row, with step
    1/sqrt(k), seeded by the sphere-packing channel; after each step the
    iterate is pulled back toward a zero-capacity channel until C(V) <= R.
    The reported gap is the distance to the sphere-packing lower bound.
    """
    if tol <= 0.0:
        raise ValidationError('Tolerance must be positive')
    rate = _rate(R).rate_bits
    c, p_star = capacity(W, tol)
    if rate >= c:
        return ExponentResult(0.0, W, None, SYMMETRIC_1D, 0.0)

    symmetric = output_symmetry(W)[0]
    if symmetric:
        return _symmetric_reduction(W, rate, tol)

    sp = sphere_packing_exponent(W, rate, tol, symmetric=False)
    anchor = _zero_rate_anchor(W)
    if anchor is None:
        raise ConvergenceError('No zero-capacity channel is absolutely continuous with respect to W')

    support = W.matrix > 0.0
    current, p = _restore_feasibility(anchor, sp.optimizing_channel.matrix, rate, tol, None)
    best_matrix = current
    best_value = float(np.max(kl_rows(Dmc(_normalize_rows(current)), W)))
    stale = 0

    for k in range(1, iterations + 1):
        v = Dmc(_normalize_rows(current))
        divergences = kl_rows(v, W)
        worst = int(np.argmax(divergences))

        row = current[worst]
        grad = np.zeros_like(row)
        mask = support[worst]
        grad[mask] = np.log2(np.maximum(row[mask], 1e-300) / W.matrix[worst, mask])
        grad[mask] -= grad[mask].mean()
        norm = np.linalg.norm(grad)
        if norm == 0.0:
            break

        step = 0.1 / math.sqrt(k)
        candidate = current.copy()
        candidate[worst] = _project_to_simplex(row - step * grad / norm, mask)
        current, p = _restore_feasibility(anchor, candidate, rate, tol, p)

        value = float(np.max(kl_rows(Dmc(_normalize_rows(current)), W)))
        if value < best_value - tol:
            best_value = value
            best_matrix = current
            stale = 0
        else:
            stale += 1
            if stale >= PATIENCE:
                logging.debug('Subgradient method stalled after {k} iterations'.format(k=k))
                break

    v = Dmc(_normalize_rows(best_matrix))
    return ExponentResult(best_value, v, None, PROJECTED_SUBGRADIENT,
                          max(0.0, best_value - sp.value_bits))


def _normalize_rows(matrix):
    matrix = np.clip(matrix, 0.0, None)
    return matrix / matrix.sum(axis=1)[:, np.newaxis]


def auxiliary_channel(W, R, tol=DEFAULT_TOLERANCE, iterations=DEFAULT_ITERATIONS):
    """Returns the channel attaining the Haroutunian exponent at rate R, i.e.
    the auxiliary channel of the change-of-measure argument. The rate is used
    as given; any slack is the caller's choice.
    """
    result = haroutunian_exponent(W, R, tol, iterations)
    rate = _rate(R).rate_bits
    c, _, _ = blahut_arimoto(result.optimizing_channel.matrix, tol)
    if c > rate + tol:
        raise ConvergenceError('Auxiliary channel exceeds the rate constraint', c - rate)
    return result


def sp_ratio_probe(W, rho_list, tol=DEFAULT_TOLERANCE):
    """Returns [(rho, E_SP(C - rho) / rho^2)] with the exponent in nats and rho
    in bits; the ratio tends to 1/(2 nu) as rho shrinks, nu in bits^2.
    """
    c, _ = capacity(W, tol)
    if c <= 0.0:
        raise ValidationError('Channel capacity is zero; no backoff is admissible')

    symmetric = output_symmetry(W)[0]
    result = []
    for rho in rho_list:
        if not 0.0 < rho < c:
            raise ValidationError('Backoff must lie in (0, C = {c}): {rho}'.format(c=c, rho=rho))
        exponent = sphere_packing_exponent(W, c - rho, tol, symmetric=symmetric)
        result.append((rho, exponent.value_bits * LN2 / rho ** 2))
    return result


def exponent_curve(W, rates, kind='sp', tol=DEFAULT_TOLERANCE, iterations=DEFAULT_ITERATIONS,
                   grid_step=DEFAULT_GRID_STEP):
    """Evaluates an exponent over a list of rates and returns the results in
    rate order.
    """
    solvers = {
        'sp': lambda r: sphere_packing_exponent(W, r, tol),
        'haroutunian': lambda r: haroutunian_exponent(W, r, tol, iterations),
        'aux': lambda r: auxiliary_channel(W, r, tol, iterations),
        'primal': lambda r: primal_sphere_packing(W, r, grid_step, tol),
    }
    solver = solvers.get(kind)
    if solver is None:
        raise ValidationError('Unknown exponent kind: {kind}'.format(kind=kind))
    return [solver(rate) for rate in rates]
