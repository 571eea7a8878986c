"""Conditional typicality and the change-of-measure bounds built on it.

A pair (x^l, y^l) is typical for V when every input symbol that occupies at
least a gamma2 fraction of x^l sees output frequencies within gamma1 of
V(.|x). The typical set is never materialized; only membership tests and
sampling are provided.
"""
import logging
import math
import numpy as np
from streamx.lib import rng
from streamx.lib.channel import LN2
from streamx.lib.channel import conditional_kl
from streamx.lib.channel import empirical_type
from streamx.lib.channel import kl_rows
from streamx.lib.error import ValidationError
from streamx.lib.stats import mc_standard_error


"""Slack of the likelihood-ratio floor comparison, in bits."""
FLOOR_SLACK = 1e-9

"""Slack of the Pinsker inequality comparison."""
PINSKER_SLACK = 1e-12


class TypicalityParams(object):
    def __init__(self, gamma1, gamma2):
        gamma1 = float(gamma1)
        gamma2 = float(gamma2)
        if not (gamma1 > 0.0 and gamma2 > 0.0):
            raise ValidationError('Typicality parameters must be positive: {g1}, {g2}'.format(
                g1=gamma1, g2=gamma2))
        self.gamma1 = gamma1
        self.gamma2 = gamma2

    def __repr__(self):
        return 'TypicalityParams({g1}, {g2})'.format(g1=self.gamma1, g2=self.gamma2)


def schedule_gammas(n, t, zeta=None):
    """Returns the parameters gamma1 = gamma2 = n^-(t + zeta) used with block
    length n and backoff exponent t. zeta defaults to (1/3 - t)/2, which is
    positive only for t < 1/3.

    Usage::
        >>> params = schedule_gammas(100, 0.25)
        >>> round(params.gamma1, 6) == round(100 ** -(0.25 + (1.0 / 3 - 0.25) / 2), 6)
        True
    """
    if zeta is None:
        zeta = (1.0 / 3.0 - t) / 2.0
    if zeta <= 0.0:
        raise ValidationError('zeta must be positive; t = {t} is outside (0, 1/3)'.format(t=t))
    gamma = float(n) ** -(t + zeta)
    return TypicalityParams(gamma, gamma)


def _joint_counts(x_seq, y_seq, V):
    x_seq = np.asarray(x_seq, dtype=np.intp)
    y_seq = np.asarray(y_seq, dtype=np.intp)
    if x_seq.ndim != 1 or x_seq.size == 0 or x_seq.shape != y_seq.shape:
        raise ValidationError('Sequences must be nonempty and of equal length')
    if (np.any(x_seq < 0) or np.any(x_seq >= V.input_size)
            or np.any(y_seq < 0) or np.any(y_seq >= V.output_size)):
        raise ValidationError('Sequences have symbols outside the channel alphabets')
    counts = np.zeros((V.input_size, V.output_size), dtype=np.int64)
    np.add.at(counts, (x_seq, y_seq), 1)
    return counts


def _is_typical_counts(counts, V, params):
    l = counts.sum()
    marginal = counts.sum(axis=1)
    for x in range(V.input_size):
        if marginal[x] < params.gamma2 * l:
            continue
        deviation = np.abs(counts[x] / float(marginal[x]) - V.row(x))
        if np.any(deviation >= params.gamma1):
            return False
    return True


def is_typical(x_seq, y_seq, V, params):
    """Returns True if y^l is conditionally typical for V given x^l.

    Usage::
        >>> from streamx.lib.channel import bsc
        >>> is_typical([0] * 10, [1] * 4 + [0] * 6, bsc(0.1), TypicalityParams(0.05, 0.05))
        False
    """
    return _is_typical_counts(_joint_counts(x_seq, y_seq, V), V, params)


def typicality_bound(params, l, x_size, y_size):
    """Returns 1 - 2|X||Y| exp(-2 gamma1^2 gamma2 l), the lower bound on the
    V-probability of the typical set. The exponential is natural (a Hoeffding
    bound); the value may be negative, in which case the bound is vacuous.

    Usage::
        >>> round(typicality_bound(TypicalityParams(0.1, 0.1), 5000, 2, 2), 6)
        0.999637
    """
    if l < 1:
        raise ValidationError('Sequence length must be positive: {l}'.format(l=l))
    return 1.0 - 2.0 * x_size * y_size * math.exp(
        -2.0 * params.gamma1 ** 2 * params.gamma2 * l)


def gamma_prime(V, W):
    """Returns the sum of |log2 V(y|x)/W(y|x)| over the support of V, or +inf
    when V is not absolutely continuous with respect to W.
    """
    if V.matrix.shape != W.matrix.shape:
        raise ValidationError('Channels have different alphabets')
    support = V.matrix > 0.0
    if np.any(support & (W.matrix == 0.0)):
        return math.inf
    ratios = V.matrix[support] / W.matrix[support]
    return float(np.sum(np.abs(np.log2(ratios))))


def _log2_likelihood(counts, channel):
    """Returns log2 of channel^l(y^l|x^l) from joint counts, -inf if zero."""
    used = counts > 0
    if np.any(used & (channel.matrix == 0.0)):
        return -math.inf
    return float(np.sum(counts[used] * np.log2(channel.matrix[used])))


def _floor_from_counts(counts, x_seq, V, W, params, g_prime=None):
    if not _is_typical_counts(counts, V, params):
        raise ValidationError('Output sequence is not typical for the auxiliary channel')
    log_v = _log2_likelihood(counts, V)
    if log_v == -math.inf:
        raise ValidationError('Output sequence has zero probability under the auxiliary channel')

    l = int(counts.sum())
    if g_prime is None:
        g_prime = gamma_prime(V, W)
    divergence = conditional_kl(V, W, empirical_type(x_seq, V.input_size))
    rhs = -l * (divergence + (params.gamma1 + 2.0 * params.gamma2) * g_prime)
    lhs = _log2_likelihood(counts, W) - log_v
    return (lhs, rhs, lhs >= rhs - FLOOR_SLACK)


def likelihood_ratio_floor(x_seq, y_seq, V, W, params):
    """Compares log2 W^l(y^l|x^l)/V^l(y^l|x^l) against the floor
    -l (D(V||W|P) + (gamma1 + 2 gamma2) gamma'), P being the type of x^l.

    Returns (lhs, rhs, holds) in bits.
    """
    if V.matrix.shape != W.matrix.shape:
        raise ValidationError('Channels have different alphabets')
    counts = _joint_counts(x_seq, y_seq, V)
    return _floor_from_counts(counts, x_seq, V, W, params)


def pinsker_gap_check(V, W):
    """Evaluates both sides of Pinsker's inequality
    sum_y |V(y|x) - W(y|x)| <= sqrt(2 ln2 D(V(.|x)||W(.|x))) for every x.

    Returns (variations, divergences, holds).

    Usage::
        >>> from streamx.lib.channel import bsc
        >>> variations, divergences, holds = pinsker_gap_check(bsc(0.2), bsc(0.1))
        >>> [round(v, 4) for v in variations], holds
        ([0.2, 0.2], True)
    """
    if V.matrix.shape != W.matrix.shape:
        raise ValidationError('Channels have different alphabets')
    variations = np.sum(np.abs(V.matrix - W.matrix), axis=1)
    divergences = kl_rows(V, W)
    with np.errstate(invalid='ignore'):
        bounds = np.sqrt(2.0 * LN2 * divergences)
    holds = bool(np.all(variations <= bounds + PINSKER_SLACK))
    return (variations, divergences, holds)


class CoverageReport(object):
    """Monte Carlo coverage of the typical set, with the likelihood-ratio
    floor checked on every typical sample.
    """

    def __init__(self, bound, typical, samples, floor_violations):
        self.bound = bound
        self.typical = typical
        self.samples = samples
        self.floor_violations = floor_violations

    @property
    def empirical(self):
        return self.typical / float(self.samples)

    @property
    def std_error(self):
        return mc_standard_error(self.empirical, self.samples)

    def to_dict(self):
        return {
            'bound': self.bound,
            'empirical': self.empirical,
            'std_error': self.std_error,
            'typical': self.typical,
            'samples': self.samples,
            'floor_violations': self.floor_violations,
            'bound_exponential_base': 'e',
        }


def sample_coverage(x_seq, V, W, params, samples, master_seed=0):
    """Draws samples outputs y^l ~ V^l(.|x^l), each from its own keyed stream,
    and counts how many are typical and how many typical ones violate the
    likelihood-ratio floor against W.
    """
    if samples < 1:
        raise ValidationError('Sample count must be positive: {n}'.format(n=samples))
    if V.matrix.shape != W.matrix.shape:
        raise ValidationError('Channels have different alphabets')

    x_seq = np.asarray(x_seq, dtype=np.intp)
    bound = typicality_bound(params, x_seq.size, V.input_size, V.output_size)
    g_prime = gamma_prime(V, W)

    typical = 0
    violations = 0
    for i in range(samples):
        y_seq = V.sample_outputs(x_seq, rng.stream(master_seed, rng.SAMPLE, i))
        counts = _joint_counts(x_seq, y_seq, V)
        if not _is_typical_counts(counts, V, params):
            continue
        typical += 1
        _, _, holds = _floor_from_counts(counts, x_seq, V, W, params, g_prime)
        if not holds:
            violations += 1

    logging.debug('{typical}/{samples} samples typical, {violations} floor violations'.format(
        typical=typical, samples=samples, violations=violations))
    return CoverageReport(bound, typical, samples, violations)
