"""Streaming transmission of a message stream over a DMC with delay T.

Message k (1 <= k <= S) arrives at block k and must be decoded at block
T_k = k + T - 1. Block b carries a codeword indexed by the prefix of messages
g_1 .. g_b; blocks beyond S carry auxiliary messages that are never decoded.
Messages and blocks are numbered from 1.
"""
import functools
import itertools
import json
import logging
import math
import multiprocessing as mp
import numpy as np
from streamx.lib import rng
from streamx.lib.channel import Dmc
from streamx.lib.channel import InputDistribution
from streamx.lib.channel import capacity
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError
from streamx.lib.stats import clopper_pearson


DEFAULT_SEARCH_LIMIT = 10 ** 7

"""Estimate adopted when no candidate or more than one candidate qualifies."""
TIE_ESTIMATE = 1

FAN_CACHE_SIZE = 256
DENSITY_CACHE_SIZE = 1024


class StreamingConfig(object):
    """Parameters of a streaming code and of its simulation.

    keyed_auxiliary selects whether the codewords of blocks beyond S are
    indexed by the auxiliary messages too (g^b), or by g^S only. redecode
    selects whether every deadline re-decodes all earlier messages, or keeps
    each message's decision from its own deadline.
    """

    def __init__(self, n, M, T, S, channel, input_dist=None, master_seed=0,
                 keyed_auxiliary=True, redecode=True, search_limit=DEFAULT_SEARCH_LIMIT):
        for name, value in (('n', n), ('M', M), ('T', T), ('S', S)):
            if int(value) != value or value < 1:
                raise ValidationError('{name} must be a positive integer: {value}'.format(
                    name=name, value=value))

        if input_dist is None:
            _, input_dist = capacity(channel)
        if input_dist.size != channel.input_size:
            raise ValidationError('Input distribution does not match the channel inputs')

        self.n = int(n)
        self.M = int(M)
        self.T = int(T)
        self.S = int(S)
        self.channel = channel
        self.input_dist = input_dist
        self.master_seed = int(master_seed)
        self.keyed_auxiliary = bool(keyed_auxiliary)
        self.redecode = bool(redecode)
        self.search_limit = int(search_limit)
        self._check_search_limit()

    @property
    def total_blocks(self):
        """T_S, the number of transmitted blocks."""
        return self.S + self.T - 1

    def deadline(self, k):
        """Returns T_k = k + T - 1."""
        return k + self.T - 1

    def key_length(self, b):
        """Returns the number of leading messages that index the codeword of
        block b.
        """
        return b if self.keyed_auxiliary else min(b, self.S)

    def search_depth(self, k):
        """Returns the last block whose message coordinate the decoder searches
        over at deadline T_k.
        """
        t_k = self.deadline(k)
        return t_k if self.keyed_auxiliary else min(t_k, self.S)

    def worst_case_work(self):
        """Returns the number of codeword evaluations that the most expensive
        deadline can need in the worst case.
        """
        k = self.S
        first = 1 if self.redecode else k
        return sum(self.M ** (self.search_depth(k) - j + 1) for j in range(first, k + 1))

    def _check_search_limit(self):
        if self.M == 1:
            return
        if self.M ** self.T > self.search_limit:
            raise ValidationError(
                'M^T = {work} exceeds the decoder search limit {limit}'.format(
                    work=self.M ** self.T, limit=self.search_limit))
        work = self.worst_case_work()
        if work > self.search_limit:
            raise ValidationError(
                'Decoding may evaluate {work} codewords per deadline, above the search '
                'limit {limit}; consider redecode = false'.format(
                    work=work, limit=self.search_limit))

    def to_dict(self):
        return {
            'n': self.n,
            'M': self.M,
            'T': self.T,
            'S': self.S,
            'channel': self.channel.to_dict(),
            'input_dist': self.input_dist.probs.tolist(),
            'master_seed': self.master_seed,
            'keyed_auxiliary': self.keyed_auxiliary,
            'redecode': self.redecode,
        }

    @classmethod
    def from_dict(cls, data, search_limit=DEFAULT_SEARCH_LIMIT):
        try:
            channel_data = data['channel']
            if isinstance(channel_data, str):
                channel = Dmc.parse(channel_data)
            else:
                channel = Dmc.from_dict(channel_data)
            input_dist = data.get('input_dist')
            if input_dist is not None:
                input_dist = InputDistribution(input_dist)
            return cls(data['n'], data['M'], data['T'], data['S'], channel, input_dist,
                       data.get('master_seed', 0), data.get('keyed_auxiliary', True),
                       data.get('redecode', True), search_limit)
        except (KeyError, TypeError) as e:
            raise ValidationError('Invalid streaming configuration: {err}'.format(err=e))


def load_config(path, search_limit=DEFAULT_SEARCH_LIMIT):
    try:
        with open(path) as f:
            data = json.load(f)
    except IOError as e:
        raise StreamxIOError('Cannot read {path}: {err}'.format(path=path, err=e))
    except ValueError as e:
        raise ValidationError('Invalid JSON in {path}: {err}'.format(path=path, err=e))
    return StreamingConfig.from_dict(data, search_limit)


def _check_prefix(config, b, prefix):
    if not 1 <= b <= config.total_blocks:
        raise ValidationError('Block index out of range: {b}'.format(b=b))
    if len(prefix) != config.key_length(b):
        raise ValidationError('Block {b} is indexed by {l} messages, got {p}'.format(
            b=b, l=config.key_length(b), p=len(prefix)))
    if any(g < 1 or g > config.M for g in prefix):
        raise ValidationError('Messages must lie in [1:{m}]: {p}'.format(m=config.M, p=prefix))


class Codebook(object):
    """Random codebook generated on demand.

    The codewords of all M children of a parent prefix form a fan drawn from
    one keyed stream, so codeword(b, prefix) is a pure function of
    (master_seed, b, prefix) whose symbols are i.i.d. from the input
    distribution.
    """

    def __init__(self, config):
        self._config = config
        self._cdf = np.cumsum(config.input_dist.probs)
        self._fan = functools.lru_cache(maxsize=FAN_CACHE_SIZE)(self._generate_fan)

    @property
    def config(self):
        return self._config

    def _generate_fan(self, b, parent):
        stream = rng.stream(self._config.master_seed, rng.CODEBOOK, b, *parent)
        u = stream.random((self._config.M, self._config.n))
        symbols = np.searchsorted(self._cdf, u, side='right')
        return np.minimum(symbols, self._config.input_dist.size - 1)

    def fan(self, b, parent):
        """Returns the M x n array of codewords of block b whose index prefix
        extends parent by one message.
        """
        return self._fan(b, tuple(parent))

    def codeword(self, b, prefix):
        prefix = tuple(prefix)
        _check_prefix(self._config, b, prefix)
        return self.fan(b, prefix[:-1])[prefix[-1] - 1]


class TableCodebook(object):
    """Codebook given by an explicit table mapping (b, prefix) to a codeword.

    Usage::
        >>> from streamx.lib.channel import identity
        >>> config = StreamingConfig(1, 2, 1, 1, identity(2))
        >>> cb = TableCodebook(config, {(1, (1,)): [0], (1, (2,)): [1]})
        >>> cb.codeword(1, (2,)).tolist()
        [1]
    """

    def __init__(self, config, table):
        self._config = config
        self._table = {}
        for (b, prefix), word in table.items():
            prefix = tuple(int(g) for g in prefix)
            _check_prefix(config, b, prefix)
            word = np.array(word, dtype=np.intp)
            if word.shape != (config.n,):
                raise ValidationError('Codeword of block {b} must have length {n}'.format(
                    b=b, n=config.n))
            if np.any(word < 0) or np.any(word >= config.channel.input_size):
                raise ValidationError('Codeword has symbols outside the input alphabet')
            word.setflags(write=False)
            self._table[(int(b), prefix)] = word

        expected = sum(config.M ** config.key_length(b)
                       for b in range(1, config.total_blocks + 1))
        if len(self._table) != expected:
            raise ValidationError('Codebook table has {got} entries, expected {expected}'.format(
                got=len(self._table), expected=expected))

    @property
    def config(self):
        return self._config

    @property
    def table(self):
        return self._table

    def fan(self, b, parent):
        parent = tuple(parent)
        return np.array([self._table[(b, parent + (g,))] for g in range(1, self._config.M + 1)])

    def codeword(self, b, prefix):
        prefix = tuple(prefix)
        _check_prefix(self._config, b, prefix)
        return self._table[(b, prefix)]

    @classmethod
    def materialize(cls, codebook):
        """Returns the table form of any codebook."""
        config = codebook.config
        table = {}
        for b in range(1, config.total_blocks + 1):
            for prefix in itertools.product(range(1, config.M + 1), repeat=config.key_length(b)):
                table[(b, prefix)] = codebook.codeword(b, prefix)
        return cls(config, table)


class TrialOutcome(object):
    def __init__(self, trial_index, messages, decoded):
        self.trial_index = trial_index
        self.messages = tuple(int(g) for g in messages)
        self.decoded = tuple(int(g) for g in decoded)

    @property
    def errors(self):
        return tuple(d != g for d, g in zip(self.decoded, self.messages))

    def __eq__(self, other):
        return (isinstance(other, TrialOutcome)
                and self.trial_index == other.trial_index
                and self.messages == other.messages
                and self.decoded == other.decoded)

    def __ne__(self, other):
        return not self.__eq__(other)

    def to_dict(self):
        return {
            'trial': self.trial_index,
            'messages': list(self.messages),
            'decoded': list(self.decoded),
            'errors': [int(e) for e in self.errors],
        }


def encode_block(cb, b, prefix):
    """Returns the codeword sent in block b for the message prefix."""
    return cb.codeword(b, prefix)


def transmit_block(W, x_block, stream):
    """Passes a block through the channel using the specified generator."""
    return W.sample_outputs(x_block, stream)


def _density_matrix(config):
    """Returns i(x;y) in bits with -inf where W(y|x) = 0."""
    W = config.channel.matrix
    q = config.input_dist.probs.dot(W)
    with np.errstate(divide='ignore', invalid='ignore'):
        density = np.log2(W) - np.log2(q)[np.newaxis, :]
    density[W == 0.0] = -math.inf
    return density


class SequentialDecoder(object):
    """Threshold decoder over the received blocks of one trial.

    For message j at deadline T_k, candidate g_j qualifies if some
    continuation of the messages after j gives an accumulated information
    density over blocks j .. T_k above (T_k - j + 1) log2 M. Block densities
    are cached per (block, parent prefix), so the cache stays valid for every
    deadline of the trial.
    """

    def __init__(self, cb, y_blocks):
        self._cb = cb
        self._config = cb.config
        self._y = np.asarray(y_blocks, dtype=np.intp)
        if self._y.ndim != 2 or self._y.shape[1] != self._config.n:
            raise ValidationError('Received blocks must have shape (blocks, {n})'.format(
                n=self._config.n))
        self._density = _density_matrix(self._config)
        self._log_m = math.log2(self._config.M)
        self._block_bound = np.array([
            float(np.sum(np.max(self._density[:, y], axis=0))) for y in self._y])
        self._fan_density = functools.lru_cache(maxsize=DENSITY_CACHE_SIZE)(
            self._compute_fan_density)

    def _compute_fan_density(self, b, parent):
        fan = self._cb.fan(b, parent)
        with np.errstate(invalid='ignore'):
            values = self._density[fan, self._y[b - 1][np.newaxis, :]].sum(axis=1)
        return np.where(np.isnan(values), -math.inf, values)

    def _block_density(self, b, messages):
        """Returns the densities of block b for every value of its last index
        coordinate, given the messages that precede it.
        """
        key = messages[:self._config.key_length(b) - 1]
        return self._fan_density(b, tuple(key))

    def _exists(self, b, messages, acc, last, depth, threshold):
        if b > last:
            return acc > threshold
        bound = float(np.sum(self._block_bound[b:last]))

        if b > depth:
            # Codeword fixed by g^S; the coordinate of block b is irrelevant.
            s = self._config.S
            value = self._block_density(b, messages[:s])[messages[s - 1] - 1]
            return self._exists(b + 1, messages, acc + value, last, depth, threshold)

        densities = self._block_density(b, messages)
        if b == last:
            return bool(np.any(acc + densities > threshold))
        order = np.argsort(-densities, kind='stable')
        for index in order:
            total = acc + densities[index]
            if total + bound <= threshold:
                break
            if self._exists(b + 1, messages + (int(index) + 1,), total, last, depth, threshold):
                return True
        return False

    def _decide(self, j, decided, k):
        """Decides message j at deadline T_k given the estimates of 1 .. j-1."""
        config = self._config
        if config.M == 1:
            return 1

        last = config.deadline(k)
        if last > self._y.shape[0]:
            raise ValidationError('Deadline {t} needs {t} received blocks, got {got}'.format(
                t=last, got=self._y.shape[0]))
        depth = config.search_depth(k)
        threshold = (last - j + 1) * self._log_m
        bound = float(np.sum(self._block_bound[j:last]))

        densities = self._block_density(j, decided)
        qualified = []
        for index in np.argsort(-densities, kind='stable'):
            total = densities[index]
            if total + bound <= threshold:
                break
            if self._exists(j + 1, decided + (int(index) + 1,), total, last, depth, threshold):
                qualified.append(int(index) + 1)
                if len(qualified) > 1:
                    break
        return qualified[0] if len(qualified) == 1 else TIE_ESTIMATE

    def decode(self, k, frozen=None):
        """Returns the estimate of message k at its deadline. Earlier messages
        are re-decoded from scratch unless their estimates are given in frozen.
        """
        if not 1 <= k <= self._config.S:
            raise ValidationError('Message index out of range: {k}'.format(k=k))
        if frozen is not None:
            if len(frozen) != k - 1:
                raise ValidationError('Expected {n} earlier estimates'.format(n=k - 1))
            return self._decide(k, tuple(frozen), k)

        decided = ()
        for j in range(1, k + 1):
            decided += (self._decide(j, decided, k),)
        return decided[-1]


def decode_at_deadline(cb, k, y_blocks, frozen=None):
    """Decodes message k from exactly T_k received blocks."""
    y_blocks = np.asarray(y_blocks)
    if y_blocks.shape[0] != cb.config.deadline(k):
        raise ValidationError('Decoding message {k} needs exactly {t} blocks, got {got}'.format(
            k=k, t=cb.config.deadline(k), got=y_blocks.shape[0]))
    return SequentialDecoder(cb, y_blocks).decode(k, frozen)


def run_trial(config, trial_index, cb=None):
    """Runs one trial: draws the messages (auxiliary ones included), sends
    every block through the channel and decodes each message at its deadline.
    The outcome is a function of (master_seed, trial_index) alone.
    """
    if cb is None:
        cb = Codebook(config)
    stream = rng.stream(config.master_seed, rng.TRIAL, trial_index)
    messages = tuple(int(g) for g in stream.integers(1, config.M + 1, size=config.total_blocks))

    y_blocks = np.empty((config.total_blocks, config.n), dtype=np.intp)
    for b in range(1, config.total_blocks + 1):
        x_block = encode_block(cb, b, messages[:config.key_length(b)])
        y_blocks[b - 1] = transmit_block(config.channel, x_block, stream)

    decoder = SequentialDecoder(cb, y_blocks)
    decoded = []
    for k in range(1, config.S + 1):
        frozen = None if config.redecode else decoded
        decoded.append(decoder.decode(k, frozen))
    return TrialOutcome(trial_index, messages[:config.S], decoded)


class ErrorEstimate(object):
    """Per-message error counts over a number of trials, with 95%
    Clopper-Pearson intervals.
    """

    def __init__(self, errors, trials, alpha=0.05):
        self.errors = [int(e) for e in errors]
        self.trials = int(trials)
        self.alpha = alpha

    @property
    def eps_hat(self):
        return [e / float(self.trials) for e in self.errors]

    @property
    def intervals(self):
        return [clopper_pearson(e, self.trials, self.alpha) for e in self.errors]

    @property
    def max_index(self):
        """Returns the 1-based index of the message with the most errors."""
        return int(np.argmax(self.errors)) + 1

    @property
    def max_eps_hat(self):
        return max(self.eps_hat)

    @property
    def max_interval(self):
        return clopper_pearson(max(self.errors), self.trials, self.alpha)

    def rows(self):
        """Returns the summary rows (k, errors, trials, eps_hat, ci_lo, ci_hi)."""
        return [(k, e, self.trials, p, lo, hi) for k, (e, p, (lo, hi))
                in enumerate(zip(self.errors, self.eps_hat, self.intervals), start=1)]

    def to_dict(self):
        lo, hi = self.max_interval
        return {
            'trials': self.trials,
            'errors': self.errors,
            'eps_hat': self.eps_hat,
            'intervals': [list(i) for i in self.intervals],
            'max_eps_hat': self.max_eps_hat,
            'max_interval': [lo, hi],
        }


SUMMARY_COLUMNS = ('k', 'errors', 'trials', 'eps_hat', 'ci_lo', 'ci_hi')


def _run_chunk(config, start, stop, keep_outcomes, table=None):
    cb = Codebook(config) if table is None else TableCodebook(config, table)
    errors = np.zeros(config.S, dtype=np.int64)
    outcomes = []
    for trial_index in range(start, stop):
        outcome = run_trial(config, trial_index, cb)
        errors += np.array(outcome.errors, dtype=np.int64)
        if keep_outcomes:
            outcomes.append(outcome)
    return (errors, outcomes)


def _run_chunk_args(args):
    return _run_chunk(*args)


def estimate_errors(config, num_trials, threads=1, chunk_size=2000, records=None, cb=None):
    """Runs trials 0 .. num_trials-1 and returns an ErrorEstimate.

    Trials are split into chunks; with threads > 1 the chunks run in worker
    processes. Counts are summed and outcomes are written to records (a
    text stream, one JSON object per line) in trial order, so the result
    does not depend on the number of workers.
    """
    if num_trials < 1:
        raise ValidationError('Number of trials must be positive: {n}'.format(n=num_trials))
    if chunk_size < 1:
        raise ValidationError('Chunk size must be positive: {n}'.format(n=chunk_size))

    table = None
    if isinstance(cb, TableCodebook):
        table = cb.table
    keep = records is not None
    chunks = [(config, start, min(start + chunk_size, num_trials), keep, table)
              for start in range(0, num_trials, chunk_size)]

    total = np.zeros(config.S, dtype=np.int64)

    def merge(result):
        errors, outcomes = result
        total[:] += errors
        for outcome in outcomes:
            records.write(json.dumps(outcome.to_dict()) + '\n')

    if threads > 1 and len(chunks) > 1:
        with mp.Pool(processes=min(threads, len(chunks))) as pool:
            for result in pool.imap(_run_chunk_args, chunks):
                merge(result)
    else:
        for chunk in chunks:
            merge(_run_chunk(*chunk))

    logging.debug('Ran {n} trials in {c} chunks'.format(n=num_trials, c=len(chunks)))
    return ErrorEstimate(total, num_trials)
