"""Exact error probabilities of tiny streaming codes by full enumeration.
"""
import itertools
import json
import logging
import math
import numpy as np
from streamx.lib import rng
from streamx.lib.channel import Dmc
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError
from streamx.lib.streaming_codec import Codebook
from streamx.lib.streaming_codec import SequentialDecoder
from streamx.lib.streaming_codec import StreamingConfig
from streamx.lib.streaming_codec import TableCodebook


DEFAULT_ENUMERATION_LIMIT = 10 ** 8

"""Allowed deviation of the total output probability of a message sequence from 1."""
TOTAL_PROBABILITY_TOLERANCE = 1e-9


class TinyInstance(object):
    """A streaming code small enough to enumerate: its configuration and an
    explicit codeword table.
    """

    def __init__(self, config, table, enumeration_limit=DEFAULT_ENUMERATION_LIMIT):
        self._config = config
        self._codebook = table if isinstance(table, TableCodebook) else TableCodebook(config, table)
        size = self.enumeration_size
        if size > enumeration_limit:
            raise ValidationError(
                'Instance needs {size} enumeration steps, above the limit {limit}'.format(
                    size=size, limit=enumeration_limit))

    @property
    def config(self):
        return self._config

    @property
    def codebook(self):
        return self._codebook

    @property
    def message_count(self):
        """Number of leading messages that index some codeword."""
        return self._config.key_length(self._config.total_blocks)

    @property
    def enumeration_size(self):
        config = self._config
        return (config.M ** self.message_count
                * config.channel.output_size ** (config.n * config.total_blocks))

    def to_dict(self):
        rows = []
        for (b, prefix), word in sorted(self._codebook.table.items()):
            rows.append({'block': b, 'prefix': list(prefix), 'codeword': word.tolist()})
        return {'config': self._config.to_dict(), 'codebook': rows}

    @classmethod
    def from_dict(cls, data, enumeration_limit=DEFAULT_ENUMERATION_LIMIT):
        try:
            config = StreamingConfig.from_dict(data['config'])
            rows = data.get('codebook')
            if rows is None:
                table = TableCodebook.materialize(Codebook(config))
            else:
                table = {(int(row['block']), tuple(row['prefix'])): row['codeword']
                         for row in rows}
        except (KeyError, TypeError) as e:
            raise ValidationError('Invalid tiny instance: {err}'.format(err=e))
        return cls(config, table, enumeration_limit)


def load_instance(path, enumeration_limit=DEFAULT_ENUMERATION_LIMIT):
    try:
        with open(path) as f:
            data = json.load(f)
    except IOError as e:
        raise StreamxIOError('Cannot read {path}: {err}'.format(path=path, err=e))
    except ValueError as e:
        raise ValidationError('Invalid JSON in {path}: {err}'.format(path=path, err=e))
    return TinyInstance.from_dict(data, enumeration_limit)


def save_instance(inst, path):
    try:
        with open(path, 'w') as f:
            json.dump(inst.to_dict(), f, indent=2)
    except IOError as e:
        raise StreamxIOError('Cannot write {path}: {err}'.format(path=path, err=e))


def _all_outputs(size, length):
    grid = np.array(list(itertools.product(range(size), repeat=length)), dtype=np.intp)
    return grid.reshape(-1, length)


def _transmitted(inst, messages, blocks):
    """Returns the concatenated codewords of the given blocks."""
    config = inst.config
    return np.concatenate([inst.codebook.codeword(b, messages[:config.key_length(b)])
                           for b in blocks])


def _decode_all(inst, y_seq):
    config = inst.config
    decoder = SequentialDecoder(inst.codebook, y_seq.reshape(config.total_blocks, config.n))
    decoded = []
    for k in range(1, config.S + 1):
        decoded.append(decoder.decode(k, None if config.redecode else decoded))
    return decoded


def exact_streaming_error(inst):
    """Returns the exact error probability of every message under the
    threshold decoder, averaging over uniform messages and every output
    sequence.
    """
    config = inst.config
    W = config.channel.matrix
    outputs = _all_outputs(config.channel.output_size, config.n * config.total_blocks)
    decisions = np.array([_decode_all(inst, y) for y in outputs], dtype=np.intp)

    length = inst.message_count
    weight = 1.0 / config.M ** length
    terms = [[] for _ in range(config.S)]
    blocks = range(1, config.total_blocks + 1)
    for messages in itertools.product(range(1, config.M + 1), repeat=length):
        x_seq = _transmitted(inst, messages, blocks)
        likelihoods = np.prod(W[x_seq[np.newaxis, :], outputs], axis=1)

        total = math.fsum(likelihoods)
        if abs(total - 1.0) > TOTAL_PROBABILITY_TOLERANCE:
            raise ValidationError('Output probabilities of {g} sum to {total}'.format(
                g=messages, total=total))

        for k in range(config.S):
            wrong = decisions[:, k] != messages[k]
            terms[k].append(weight * math.fsum(likelihoods[wrong]))

    errors = [math.fsum(t) for t in terms]
    logging.debug('Exact errors: {errors}'.format(errors=errors))
    return errors


def exact_feedforward_map_error(inst, k, window_only):
    """Returns the exact error probability of message k under MAP decoding
    with the true earlier messages g^{k-1} given. The decoder observes
    blocks 1 .. T_k, or only blocks k .. T_k when window_only is set. Ties
    go to the smallest message index.
    """
    config = inst.config
    if not 1 <= k <= config.S:
        raise ValidationError('Message index out of range: {k}'.format(k=k))

    last = config.deadline(k)
    first = k if window_only else 1
    blocks = range(first, last + 1)
    W = config.channel.matrix
    outputs = _all_outputs(config.channel.output_size, config.n * len(blocks))

    span = config.key_length(last)
    free = span - k
    terms = []
    for past in itertools.product(range(1, config.M + 1), repeat=k - 1):
        joint = np.zeros((config.M, outputs.shape[0]))
        for g in range(1, config.M + 1):
            for rest in itertools.product(range(1, config.M + 1), repeat=free):
                messages = past + (g,) + rest
                x_seq = _transmitted(inst, messages, blocks)
                joint[g - 1] += np.prod(W[x_seq[np.newaxis, :], outputs], axis=1)
        joint /= config.M ** (free + 1)

        guesses = np.argmax(joint, axis=0)
        for g in range(config.M):
            terms.append(math.fsum(joint[g][guesses != g]))

    return math.fsum(terms) / config.M ** (k - 1)


def random_tiny_instance(seed, enumeration_limit=DEFAULT_ENUMERATION_LIMIT):
    """Returns a random enumerable instance: a random binary-input channel,
    small code parameters and a random codeword table, all derived from seed.
    """
    stream = rng.stream(seed, rng.INSTANCE)
    outputs = int(stream.integers(2, 4))
    matrix = stream.dirichlet(np.ones(outputs), size=2)
    matrix = matrix / matrix.sum(axis=1)[:, np.newaxis]
    channel = Dmc(matrix)

    n = int(stream.integers(1, 3))
    T = int(stream.integers(1, 3))
    S = int(stream.integers(1, 4))
    keyed = bool(stream.integers(0, 2))
    config = StreamingConfig(n, 2, T, S, channel, master_seed=int(stream.integers(1 << 62)),
                             keyed_auxiliary=keyed)
    table = TableCodebook.materialize(Codebook(config))
    return TinyInstance(config, table, enumeration_limit)
