"""Keyed, counter-based random streams.

Every stream is a Philox generator seeded from a SeedSequence whose spawn key
names what the stream is for, so a stream is a pure function of
(master seed, domain, indices) and never depends on the order in which
streams are created.
"""
import numpy as np


"""Domain tags that keep streams of different purposes apart."""
CODEBOOK = 1
TRIAL = 2
POINT = 3
SAMPLE = 4
INSTANCE = 5

MASK64 = (1 << 64) - 1


def stream(master_seed, domain, *indices):
    """Returns a numpy Generator keyed by the master seed, a domain tag and
    nonnegative integer indices.

    Usage::
        >>> a = stream(7, TRIAL, 3).integers(1 << 30)
        >>> b = stream(7, TRIAL, 3).integers(1 << 30)
        >>> bool(a == b)
        True
    """
    key = (domain,) + tuple(int(i) for i in indices)
    seq = np.random.SeedSequence(entropy=int(master_seed) & MASK64, spawn_key=key)
    return np.random.Generator(np.random.Philox(seq))


def derive_seed(master_seed, domain, *indices):
    """Returns a 64-bit seed derived from the master seed for a sub-task, such
    as one point of a sweep.
    """
    key = (domain,) + tuple(int(i) for i in indices)
    seq = np.random.SeedSequence(entropy=int(master_seed) & MASK64, spawn_key=key)
    return int(seq.generate_state(1, dtype=np.uint64)[0])
