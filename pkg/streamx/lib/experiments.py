"""Parameter schedules of the moderate-deviations regime and sweeps over them.

At block length n and backoff exponent t, the code carries
log2 M = nC - n^(1-t) bits per block and streams S = ceil(n^t ln n)
messages. The moderate-deviations constant of a sweep point is
-log2(eps) / n^(1-2t).
"""
import csv
import itertools
import json
import logging
import math
import os
from streamx.lib import rng
from streamx.lib.channel import DEFAULT_TOLERANCE
from streamx.lib.channel import Dmc
from streamx.lib.channel import LN2
from streamx.lib.channel import capacity
from streamx.lib.channel import dispersion
from streamx.lib.channel import output_symmetry
from streamx.lib.error import StreamxError
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError
from streamx.lib.exponents import sphere_packing_exponent
from streamx.lib.logutil import stopwatch
from streamx.lib.path import companion
from streamx.lib.stats import clopper_pearson
from streamx.lib.streaming_codec import DEFAULT_SEARCH_LIMIT
from streamx.lib.streaming_codec import StreamingConfig
from streamx.lib.streaming_codec import estimate_errors


OMEGA_NT_LOG = 'omega_nt_log'
FIXED = 'fixed'
S_RULES = (OMEGA_NT_LOG, FIXED)

"""Upper end (exclusive) of the backoff exponents covered by the converse."""
CONVERSE_T_LIMIT = 1.0 / 3.0

"""Largest log2 M that a float message count can hold."""
MAX_LOG2_M = 1023.0


class Schedule(object):
    """A sweep over block lengths and delays at a fixed backoff exponent t.
    """

    def __init__(self, channel, t, n_list, T_list, s_rule=OMEGA_NT_LOG, s_fixed=None,
                 trials=1000, master_seed=0, output='sweep.csv', keyed_auxiliary=True,
                 redecode=False):
        t = float(t)
        if not 0.0 < t < 0.5:
            raise ValidationError('t must lie in (0, 1/2): {t}'.format(t=t))
        if s_rule not in S_RULES:
            raise ValidationError('Unknown S rule: {rule}'.format(rule=s_rule))
        if s_rule == FIXED and (s_fixed is None or int(s_fixed) < 1):
            raise ValidationError('The fixed S rule needs a positive S')
        if int(trials) < 1:
            raise ValidationError('Number of trials must be positive: {n}'.format(n=trials))
        if any(int(n) < 1 for n in n_list) or any(int(T) < 1 for T in T_list):
            raise ValidationError('Block lengths and delays must be positive')

        self.channel_spec = channel
        self.t = t
        self.n_list = [int(n) for n in n_list]
        self.T_list = [int(T) for T in T_list]
        self.s_rule = s_rule
        self.s_fixed = None if s_fixed is None else int(s_fixed)
        self.trials = int(trials)
        self.master_seed = int(master_seed)
        self.output = output
        self.keyed_auxiliary = bool(keyed_auxiliary)
        self.redecode = bool(redecode)

    @property
    def channel(self):
        return Dmc.parse(self.channel_spec)

    @property
    def in_converse_range(self):
        return self.t < CONVERSE_T_LIMIT

    def points(self):
        """Returns the (n, T) sweep points in sweep order."""
        return list(itertools.product(self.n_list, self.T_list))

    def to_dict(self):
        return {
            'channel': self.channel_spec,
            't': self.t,
            'n_list': self.n_list,
            'T_list': self.T_list,
            's_rule': self.s_rule,
            's_fixed': self.s_fixed,
            'trials': self.trials,
            'master_seed': self.master_seed,
            'output': self.output,
            'keyed_auxiliary': self.keyed_auxiliary,
            'redecode': self.redecode,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data['channel'], data['t'], data['n_list'], data['T_list'],
                       data.get('s_rule', OMEGA_NT_LOG), data.get('s_fixed'),
                       data.get('trials', 1000), data.get('master_seed', 0),
                       data.get('output', 'sweep.csv'), data.get('keyed_auxiliary', True),
                       data.get('redecode', False))
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError('Invalid schedule: {err}'.format(err=e))


def load_schedule(path):
    try:
        with open(path) as f:
            data = json.load(f)
    except IOError as e:
        raise StreamxIOError('Cannot read {path}: {err}'.format(path=path, err=e))
    except ValueError as e:
        raise ValidationError('Invalid JSON in {path}: {err}'.format(path=path, err=e))
    return Schedule.from_dict(data)


def target_log2_m(C_bits, n, t):
    """Returns nC - n^(1-t).

    Usage::
        >>> round(target_log2_m(0.5, 100, 0.5), 6)
        40.0
    """
    return n * C_bits - float(n) ** (1.0 - t)


def message_count(C_bits, n, t):
    """Returns M = max(2, round(2^(nC - n^(1-t)))). A point with
    nC <= n^(1-t) is infeasible and gets the floor 2. A point whose nC - n^(1-t)
    exceeds MAX_LOG2_M raises ValidationError.

    Usage::
        >>> message_count(0.500085, 40, 0.3)
        110
    """
    target = target_log2_m(C_bits, n, t)
    if target <= 0.0:
        logging.warning('Infeasible point n = {n}, t = {t}: nC <= n^(1-t)'.format(n=n, t=t))
        return 2
    if target > MAX_LOG2_M:
        raise ValidationError('Point n = {n}, t = {t} needs 2^{target:.1f} messages'.format(
            n=n, t=t, target=target))
    return max(2, int(round(2.0 ** target)))


def stream_length(n, t, rule=OMEGA_NT_LOG, fixed=None):
    """Returns S = ceil(n^t ln n) or the fixed value.

    Usage::
        >>> stream_length(40, 0.3)
        12
        >>> stream_length(100, 0.3)
        19
        >>> stream_length(40, 0.3, FIXED, 3)
        3
    """
    if rule == FIXED:
        if fixed is None or fixed < 1:
            raise ValidationError('The fixed S rule needs a positive S')
        return int(fixed)
    if rule != OMEGA_NT_LOG:
        raise ValidationError('Unknown S rule: {rule}'.format(rule=rule))
    return max(1, int(math.ceil(float(n) ** t * math.log(n))))


def md_constant(eps_hat, n, t):
    """Returns -log2(eps_hat) / n^(1-2t).

    Usage::
        >>> md_constant(1.0, 40, 0.3)
        0.0
    """
    if not 0.0 < eps_hat <= 1.0:
        raise ValidationError('Error estimate must lie in (0, 1]: {eps}'.format(eps=eps_hat))
    return -math.log2(eps_hat) / float(n) ** (1.0 - 2.0 * t)


def theoretical_constant(W, T, tol=DEFAULT_TOLERANCE):
    """Returns T / (2 nu), the moderate-deviations constant of a delay-T
    streaming code with the exponent measured in nats.
    """
    nu, _ = dispersion(W, tol)
    if nu <= 0.0:
        raise ValidationError('Channel dispersion is zero')
    return T / (2.0 * nu)


def converse_proxy(W, n, t, T, slack=0.0, tol=DEFAULT_TOLERANCE):
    """Returns T n^(2t) E_SP(C - n^-t - slack) with the exponent in nats, the
    leading term of the converse's normalized exponent. The proof's
    vanishing multiplicative factors are dropped, so this is a proxy and not
    a bound.
    """
    symmetric, _ = output_symmetry(W)
    if not symmetric:
        raise ValidationError('The converse proxy needs an output-symmetric channel')
    c, _ = capacity(W, tol)
    rate = c - float(n) ** -t - slack
    if rate <= 0.0:
        raise ValidationError('Backed-off rate is not positive: {rate}'.format(rate=rate))
    exponent = sphere_packing_exponent(W, rate, tol, symmetric=True)
    return T * float(n) ** (2.0 * t) * exponent.value_bits * LN2


class RunRecord(object):
    """Outputs of one sweep point.

    md_constant is computed from the largest per-message error estimate; when
    no error was observed the Clopper-Pearson upper bound stands in for it and
    the record is flagged censored.
    """

    FIELDS = ('n', 'T', 't', 'M', 'log2_m_target', 'log2_m', 'feasible', 'S', 'trials',
              'errors', 'eps_hat', 'ci_lo', 'ci_hi', 'max_eps_hat', 'max_ci_lo', 'max_ci_hi',
              'censored', 'md_constant', 'md_constant_nats', 'redecode', 'seed', 'wall_time')
    LIST_FIELDS = ('errors', 'eps_hat', 'ci_lo', 'ci_hi')
    INT_FIELDS = ('n', 'T', 'M', 'S', 'trials', 'seed')
    BOOL_FIELDS = ('feasible', 'censored', 'redecode')

    def __init__(self, **values):
        missing = [f for f in self.FIELDS if f not in values]
        if missing:
            raise ValidationError('Run record misses {fields}'.format(fields=', '.join(missing)))
        for field in self.FIELDS:
            setattr(self, field, values[field])

    @classmethod
    def from_estimate(cls, config, t, estimate, wall_time, log2_m_target):
        errors = max(estimate.errors)
        censored = errors == 0
        lo, hi = estimate.max_interval
        eps = hi if censored else estimate.max_eps_hat
        md = md_constant(eps, config.n, t)
        intervals = estimate.intervals
        return cls(
            n=config.n, T=config.T, t=t, M=config.M, log2_m_target=log2_m_target,
            log2_m=math.log2(config.M), feasible=log2_m_target > 0.0, S=config.S,
            trials=estimate.trials, errors=estimate.errors, eps_hat=estimate.eps_hat,
            ci_lo=[i[0] for i in intervals], ci_hi=[i[1] for i in intervals],
            max_eps_hat=estimate.max_eps_hat, max_ci_lo=lo, max_ci_hi=hi,
            censored=censored, md_constant=md, md_constant_nats=md * LN2,
            redecode=config.redecode, seed=config.master_seed, wall_time=wall_time)

    @property
    def key(self):
        return (self.n, self.T)

    def to_row(self):
        row = {}
        for field in self.FIELDS:
            value = getattr(self, field)
            if field in self.LIST_FIELDS:
                row[field] = json.dumps(list(value))
            elif field in self.BOOL_FIELDS:
                row[field] = int(bool(value))
            else:
                row[field] = repr(value) if isinstance(value, float) else value
        return row

    @classmethod
    def from_row(cls, row):
        values = {}
        try:
            for field in cls.FIELDS:
                text = row[field]
                if field in cls.LIST_FIELDS:
                    values[field] = json.loads(text)
                elif field in cls.BOOL_FIELDS:
                    values[field] = bool(int(text))
                elif field in cls.INT_FIELDS:
                    values[field] = int(text)
                else:
                    values[field] = float(text)
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError('Malformed run record: {err}'.format(err=e))
        return cls(**values)

    def __eq__(self, other):
        return isinstance(other, RunRecord) and all(
            getattr(self, f) == getattr(other, f) for f in self.FIELDS)

    def __ne__(self, other):
        return not self.__eq__(other)


def read_records(path):
    try:
        with open(path, newline='') as f:
            return [RunRecord.from_row(row) for row in csv.DictReader(f)]
    except IOError as e:
        raise StreamxIOError('Cannot read {path}: {err}'.format(path=path, err=e))


def write_records(records, path):
    try:
        with open(path, 'w', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=RunRecord.FIELDS)
            writer.writeheader()
            for record in records:
                writer.writerow(record.to_row())
    except IOError as e:
        raise StreamxIOError('Cannot write {path}: {err}'.format(path=path, err=e))


def _append_record(record, path):
    try:
        with open(path, 'a', newline='') as f:
            csv.DictWriter(f, fieldnames=RunRecord.FIELDS).writerow(record.to_row())
    except IOError as e:
        raise StreamxIOError('Cannot write {path}: {err}'.format(path=path, err=e))


def write_gnuplot(records, path, redecode=False):
    """Writes whitespace-separated columns n^(1-2t), -log2(eps), n, T, so
    that the moderate-deviations constant reads as a slope. The header names
    the decoder variant.
    """
    try:
        with open(path, 'w') as f:
            f.write('# redecode: {flag}\n'.format(flag='true' if redecode else 'false'))
            f.write('# n^(1-2t) -log2(eps) n T censored\n')
            for record in records:
                eps = record.max_ci_hi if record.censored else record.max_eps_hat
                f.write('{x!r} {y!r} {n} {T} {c}\n'.format(
                    x=float(record.n) ** (1.0 - 2.0 * record.t), y=-math.log2(eps),
                    n=record.n, T=record.T, c=int(record.censored)))
    except IOError as e:
        raise StreamxIOError('Cannot write {path}: {err}'.format(path=path, err=e))


def run_point(schedule, point_index, n, T, C_bits, input_dist, threads=1, chunk_size=2000,
              search_limit=DEFAULT_SEARCH_LIMIT):
    """Simulates one sweep point with a seed derived from the point index."""
    log2_m_target = target_log2_m(C_bits, n, schedule.t)
    M = message_count(C_bits, n, schedule.t)
    S = stream_length(n, schedule.t, schedule.s_rule, schedule.s_fixed)
    seed = rng.derive_seed(schedule.master_seed, rng.POINT, point_index)
    config = StreamingConfig(n, M, T, S, schedule.channel, input_dist, seed,
                             schedule.keyed_auxiliary, schedule.redecode, search_limit)

    with stopwatch('n = {n}, T = {T}'.format(n=n, T=T)) as watch:
        estimate = estimate_errors(config, schedule.trials, threads, chunk_size)
    return RunRecord.from_estimate(config, schedule.t, estimate, watch.elapsed, log2_m_target)


def run_sweep(schedule, threads=1, chunk_size=2000, search_limit=DEFAULT_SEARCH_LIMIT,
              resume=False, gnuplot=False, output=None, tol=DEFAULT_TOLERANCE):
    """Runs every point of the schedule and appends its record to the CSV
    output. With resume, points already present in the output are skipped.
    A failing point is logged and the sweep goes on. Returns the records of
    the output in sweep order.
    """
    path = output if output is not None else schedule.output
    if not schedule.in_converse_range:
        logging.warning('t = {t} is outside the range (0, 1/3) of the converse'.format(
            t=schedule.t))

    completed = {}
    if resume and os.path.exists(path):
        completed = dict((r.key, r) for r in read_records(path))
    else:
        write_records([], path)

    W = schedule.channel
    c, input_dist = capacity(W, tol)
    records = []
    for point_index, (n, T) in enumerate(schedule.points()):
        if (n, T) in completed:
            logging.info('Skipping completed point n = {n}, T = {T}'.format(n=n, T=T))
            records.append(completed[(n, T)])
            continue

        logging.info('Running point n = {n}, T = {T}'.format(n=n, T=T))
        try:
            record = run_point(schedule, point_index, n, T, c, input_dist, threads,
                               chunk_size, search_limit)
            _append_record(record, path)
        except StreamxError as e:
            logging.error('[Error] Point n = {n}, T = {T}: {message}'.format(
                n=n, T=T, message=e.message))
            continue
        records.append(record)

    if gnuplot:
        write_gnuplot(records, companion(path, '.dat'), schedule.redecode)
    return records
