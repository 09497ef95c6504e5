"""Named random streams.

Every random quantity in the package is drawn from a generator obtained by
``stream(seed, *keys)``.  The keys name the purpose of the stream (experiment,
grid index, replicate index, ...), so results never depend on the order in
which tasks run or on the number of worker threads.
"""
from __future__ import annotations

import hashlib

import numpy as np


def _key_words(keys: tuple) -> tuple[int, ...]:
    digest = hashlib.blake2b(repr(keys).encode("utf-8"), digest_size=16).digest()
    return tuple(int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4))


def stream(seed: int, *keys) -> np.random.Generator:
    """Return the generator for stream ``keys`` under root ``seed``.

    Parameters
    ----------
    seed : int
        Non-negative root seed.
    *keys
        Stream name components; any values with a stable ``repr`` (str, int).

    Returns
    -------
    numpy.random.Generator
        A PCG64 generator that depends only on ``seed`` and ``keys``.
    """
    if int(seed) < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=_key_words(tuple(keys)))
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    """Coerce ``None``, an int seed, or a generator into a generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return stream(0, "default")
    return stream(int(rng), "default")
