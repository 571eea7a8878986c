import math
from scipy.stats import beta
from streamx.lib.error import ValidationError


def clopper_pearson(errors, trials, alpha=0.05):
    """Returns the exact (Clopper-Pearson) two-sided 1-alpha confidence
    interval (lo, hi) of a binomial proportion.

    Usage::
        >>> lo, hi = clopper_pearson(0, 1000)
        >>> lo, round(hi, 4)
        (0.0, 0.0037)
    """
    if trials < 1 or errors < 0 or errors > trials:
        raise ValidationError('Invalid binomial counts: {e}/{n}'.format(e=errors, n=trials))

    lo = 0.0 if errors == 0 else float(beta.ppf(alpha / 2.0, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(beta.ppf(1.0 - alpha / 2.0, errors + 1, trials - errors))
    return (lo, hi)


def mc_standard_error(p, trials):
    """Returns the standard error sqrt(p(1-p)/trials) of a Monte Carlo
    estimate of a probability p.
    """
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)
