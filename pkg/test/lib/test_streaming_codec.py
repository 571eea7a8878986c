import doctest
import io
import json
import os
import unittest

import numpy as np

import streamx.lib.streaming_codec
from streamx.lib import rng
from streamx.lib.channel import InputDistribution
from streamx.lib.channel import bsc
from streamx.lib.channel import identity
from streamx.lib.error import StreamxIOError
from streamx.lib.error import ValidationError
from streamx.lib.streaming_codec import Codebook
from streamx.lib.streaming_codec import ErrorEstimate
from streamx.lib.streaming_codec import SequentialDecoder
from streamx.lib.streaming_codec import StreamingConfig
from streamx.lib.streaming_codec import TableCodebook
from streamx.lib.streaming_codec import TrialOutcome
from streamx.lib.streaming_codec import decode_at_deadline
from streamx.lib.streaming_codec import encode_block
from streamx.lib.streaming_codec import estimate_errors
from streamx.lib.streaming_codec import load_config
from streamx.lib.streaming_codec import run_trial
from streamx.lib.streaming_codec import transmit_block


SCRIPT_PATH = os.path.dirname(os.path.abspath(__file__))
STREAMING_JSON = os.path.join(SCRIPT_PATH, '../fixture/streaming.json')


def load_tests(loader, tests, ignore):
    tests.addTests(doctest.DocTestSuite(streamx.lib.streaming_codec))
    return tests


def repetition_table(config, word=None):
    """Maps every (block, prefix) to the last indexing message repeated n
    times, or to a fixed word.
    """
    table = {}
    for b in range(1, config.total_blocks + 1):
        length = config.key_length(b)
        for prefix in np.ndindex(*([config.M] * length)):
            prefix = tuple(g + 1 for g in prefix)
            table[(b, prefix)] = word if word is not None else [prefix[-1] - 1] * config.n
    return table


def received_blocks(config, cb, messages, seed):
    stream = rng.stream(seed, rng.TRIAL, 0)
    y_blocks = []
    for b in range(1, config.total_blocks + 1):
        x_block = encode_block(cb, b, messages[:config.key_length(b)])
        y_blocks.append(transmit_block(config.channel, x_block, stream))
    return np.array(y_blocks)


class TestStreamingConfig(unittest.TestCase):
    def test_indices(self):
        config = StreamingConfig(4, 3, 2, 5, bsc(0.1))
        self.assertEqual(config.total_blocks, 6)
        self.assertEqual(config.deadline(1), 2)
        self.assertEqual(config.deadline(5), 6)
        self.assertEqual(config.key_length(6), 6)
        self.assertEqual(config.search_depth(5), 6)

    def test_unkeyed_auxiliary(self):
        config = StreamingConfig(4, 3, 3, 2, bsc(0.1), keyed_auxiliary=False)
        self.assertEqual(config.key_length(4), 2)
        self.assertEqual(config.key_length(1), 1)
        self.assertEqual(config.search_depth(2), 2)
        self.assertEqual(config.search_depth(1), 2)

    def test_capacity_input(self):
        config = StreamingConfig(4, 3, 2, 5, bsc(0.1))
        np.testing.assert_allclose(config.input_dist.probs, [0.5, 0.5], atol=1e-9)

    def test_worst_case_work(self):
        config = StreamingConfig(4, 3, 2, 3, bsc(0.1))
        self.assertEqual(config.worst_case_work(), 3 ** 4 + 3 ** 3 + 3 ** 2)
        config = StreamingConfig(4, 3, 2, 3, bsc(0.1), redecode=False)
        self.assertEqual(config.worst_case_work(), 3 ** 2)

    def test_search_limit(self):
        with self.assertRaises(ValidationError):
            StreamingConfig(4, 100, 4, 1, bsc(0.1), search_limit=10 ** 7)
        with self.assertRaises(ValidationError):
            StreamingConfig(4, 10, 2, 8, bsc(0.1), search_limit=10 ** 5)

        # Freezing earlier decisions keeps long streams decodable.
        config = StreamingConfig(4, 10, 2, 8, bsc(0.1), redecode=False, search_limit=10 ** 5)
        self.assertEqual(config.worst_case_work(), 100)

    def test_invalid(self):
        with self.assertRaises(ValidationError):
            StreamingConfig(0, 2, 1, 1, bsc(0.1))
        with self.assertRaises(ValidationError):
            StreamingConfig(2, 2, 1.5, 1, bsc(0.1))
        with self.assertRaises(ValidationError):
            StreamingConfig(2, 2, 1, 1, bsc(0.1), InputDistribution.uniform(3))

    def test_load_config(self):
        config = load_config(STREAMING_JSON)
        self.assertEqual((config.n, config.M, config.T, config.S), (4, 3, 2, 3))
        self.assertEqual(config.channel, bsc(0.05))
        self.assertEqual(config.master_seed, 20240601)
        self.assertTrue(config.redecode)

        with self.assertRaises(StreamxIOError):
            load_config('no/such/config.json')

    def test_dict(self):
        config = load_config(STREAMING_JSON)
        data = json.loads(json.dumps(config.to_dict()))
        copy = StreamingConfig.from_dict(data)
        self.assertEqual(copy.to_dict(), config.to_dict())

        with self.assertRaises(ValidationError):
            StreamingConfig.from_dict({'n': 2, 'M': 2, 'T': 1, 'channel': 'bsc:0.1'})


class TestCodebook(unittest.TestCase):
    def test_deterministic(self):
        config = load_config(STREAMING_JSON)
        a = Codebook(config).codeword(3, (1, 2, 3))
        b = Codebook(config).codeword(3, (1, 2, 3))
        self.assertEqual(a.tolist(), b.tolist())
        self.assertEqual(a.shape, (4,))

    def test_fan(self):
        config = load_config(STREAMING_JSON)
        cb = Codebook(config)
        fan = cb.fan(2, (2,))
        self.assertEqual(fan.shape, (3, 4))
        self.assertEqual(cb.codeword(2, (2, 3)).tolist(), fan[2].tolist())

    def test_seed_changes_codebook(self):
        words = []
        for seed in range(2):
            config = StreamingConfig(64, 2, 1, 1, bsc(0.1), master_seed=seed)
            words.append(Codebook(config).codeword(1, (1,)).tolist())
        self.assertNotEqual(words[0], words[1])

    def test_symbol_frequencies(self):
        config = StreamingConfig(500, 2, 1, 1, identity(3),
                                 input_dist=InputDistribution([0.2, 0.3, 0.5]))
        word = Codebook(config).fan(1, ())
        counts = np.bincount(word.ravel(), minlength=3) / float(word.size)
        np.testing.assert_allclose(counts, [0.2, 0.3, 0.5], atol=0.05)

    def test_invalid_prefix(self):
        cb = Codebook(load_config(STREAMING_JSON))
        with self.assertRaises(ValidationError):
            cb.codeword(2, (1,))
        with self.assertRaises(ValidationError):
            cb.codeword(1, (4,))
        with self.assertRaises(ValidationError):
            cb.codeword(5, (1, 1, 1, 1, 1))

    def test_table_codebook(self):
        config = StreamingConfig(2, 2, 1, 2, identity(2))
        cb = TableCodebook(config, repetition_table(config))
        self.assertEqual(cb.codeword(2, (1, 2)).tolist(), [1, 1])
        self.assertEqual(cb.fan(2, (1,)).tolist(), [[0, 0], [1, 1]])

    def test_table_codebook_invalid(self):
        config = StreamingConfig(2, 2, 1, 2, identity(2))
        table = repetition_table(config)
        del table[(2, (1, 1))]
        with self.assertRaises(ValidationError):
            TableCodebook(config, table)
        with self.assertRaises(ValidationError):
            TableCodebook(config, repetition_table(config, word=[0]))
        with self.assertRaises(ValidationError):
            TableCodebook(config, repetition_table(config, word=[0, 2]))

    def test_materialize(self):
        config = load_config(STREAMING_JSON)
        lazy = Codebook(config)
        table = TableCodebook.materialize(lazy)
        self.assertEqual(len(table.table), 3 + 9 + 27 + 81)
        self.assertEqual(table.codeword(4, (3, 1, 2, 2)).tolist(),
                         lazy.codeword(4, (3, 1, 2, 2)).tolist())


class TestSequentialDecoder(unittest.TestCase):
    def test_noiseless(self):
        config = StreamingConfig(2, 2, 1, 3, identity(2))
        cb = TableCodebook(config, repetition_table(config))
        for trial_index in range(20):
            outcome = run_trial(config, trial_index, cb)
            self.assertEqual(outcome.decoded, outcome.messages)
            self.assertFalse(any(outcome.errors))

    def test_noiseless_frozen(self):
        config = StreamingConfig(2, 2, 2, 3, identity(2), redecode=False)
        cb = TableCodebook(config, repetition_table(config))
        for trial_index in range(10):
            self.assertFalse(any(run_trial(config, trial_index, cb).errors))

    def test_tie(self):
        config = StreamingConfig(2, 2, 1, 1, identity(2))
        cb = TableCodebook(config, repetition_table(config, word=[0, 0]))
        # Both candidates explain the output equally well.
        self.assertEqual(decode_at_deadline(cb, 1, [[0, 0]]), 1)

    def test_no_candidate(self):
        config = StreamingConfig(2, 2, 1, 1, identity(2))
        cb = TableCodebook(config, repetition_table(config))
        self.assertEqual(decode_at_deadline(cb, 1, [[1, 0]]), 1)
        self.assertEqual(decode_at_deadline(cb, 1, [[1, 1]]), 2)

    def test_single_message(self):
        config = StreamingConfig(3, 1, 1, 2, bsc(0.1))
        self.assertEqual(run_trial(config, 0).decoded, (1, 1))

    def test_causal(self):
        config = load_config(STREAMING_JSON)
        cb = Codebook(config)
        messages = (2, 3, 1, 2)
        y_blocks = received_blocks(config, cb, messages, seed=5)

        perturbed = y_blocks.copy()
        perturbed[config.deadline(1):] = 1 - perturbed[config.deadline(1):]

        expected = SequentialDecoder(cb, y_blocks).decode(1)
        self.assertEqual(SequentialDecoder(cb, perturbed).decode(1), expected)
        self.assertEqual(decode_at_deadline(cb, 1, y_blocks[:config.deadline(1)]), expected)

    def test_decode_at_deadline_needs_exact_blocks(self):
        config = load_config(STREAMING_JSON)
        cb = Codebook(config)
        y_blocks = received_blocks(config, cb, (1, 1, 1, 1), seed=1)
        with self.assertRaises(ValidationError):
            decode_at_deadline(cb, 1, y_blocks)
        with self.assertRaises(ValidationError):
            SequentialDecoder(cb, y_blocks[:2]).decode(2)
        with self.assertRaises(ValidationError):
            SequentialDecoder(cb, y_blocks).decode(4)
        with self.assertRaises(ValidationError):
            SequentialDecoder(cb, y_blocks).decode(2, frozen=[])

    def test_mostly_correct_on_good_channel(self):
        config = load_config(STREAMING_JSON)
        cb = Codebook(config)
        outcomes = [run_trial(config, i, cb) for i in range(30)]
        correct = sum(o.decoded[0] == o.messages[0] for o in outcomes)
        self.assertGreater(correct, 10)


class TestRunTrial(unittest.TestCase):
    def test_deterministic(self):
        config = load_config(STREAMING_JSON)
        self.assertEqual(run_trial(config, 3), run_trial(config, 3))

    def test_messages_in_range(self):
        config = load_config(STREAMING_JSON)
        outcome = run_trial(config, 0)
        self.assertEqual(len(outcome.messages), config.S)
        self.assertEqual(len(outcome.decoded), config.S)
        self.assertTrue(all(1 <= g <= config.M for g in outcome.messages + outcome.decoded))

    def test_outcome_to_dict(self):
        outcome = TrialOutcome(4, [1, 2], [1, 1])
        self.assertEqual(outcome.errors, (False, True))
        self.assertEqual(outcome.to_dict(),
                         {'trial': 4, 'messages': [1, 2], 'decoded': [1, 1], 'errors': [0, 1]})


class TestEstimateErrors(unittest.TestCase):
    def test_independent_of_workers(self):
        config = load_config(STREAMING_JSON)
        results = []
        for threads, chunk_size in ((1, 40), (1, 7), (2, 7)):
            records = io.StringIO()
            estimate = estimate_errors(config, 40, threads=threads, chunk_size=chunk_size,
                                       records=records)
            results.append((estimate.errors, records.getvalue()))

        self.assertEqual(results[0], results[1])
        self.assertEqual(results[0], results[2])
        lines = results[0][1].splitlines()
        self.assertEqual(len(lines), 40)
        self.assertEqual([json.loads(line)['trial'] for line in lines], list(range(40)))

    def test_table_codebook(self):
        config = StreamingConfig(2, 2, 1, 3, identity(2))
        cb = TableCodebook(config, repetition_table(config))
        estimate = estimate_errors(config, 20, threads=2, chunk_size=5, cb=cb)
        self.assertEqual(estimate.errors, [0, 0, 0])

    def test_invalid(self):
        config = load_config(STREAMING_JSON)
        with self.assertRaises(ValidationError):
            estimate_errors(config, 0)
        with self.assertRaises(ValidationError):
            estimate_errors(config, 10, chunk_size=0)


class TestErrorEstimate(unittest.TestCase):
    def test_summary(self):
        estimate = ErrorEstimate([1, 4, 2], 10)
        self.assertEqual(estimate.eps_hat, [0.1, 0.4, 0.2])
        self.assertEqual(estimate.max_index, 2)
        self.assertEqual(estimate.max_eps_hat, 0.4)
        self.assertEqual(estimate.max_interval, estimate.intervals[1])

        rows = estimate.rows()
        self.assertEqual(rows[0][:4], (1, 1, 10, 0.1))
        self.assertEqual(len(rows), 3)

        data = estimate.to_dict()
        self.assertEqual(data['errors'], [1, 4, 2])
        self.assertEqual(data['trials'], 10)


if __name__ == '__main__':
    unittest.main()
