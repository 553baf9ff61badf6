"""Counter-based pseudorandom streams.

Every stochastic component draws from a splitmix64-style generator that is
*counter based*: output t of a stream is a pure function of (seed, stream,
t).  Nothing is shared between streams, so trials can be evaluated in any
order, split across threads, or recomputed in isolation, and the results
are bit-identical.  Streams are cheap value objects; creating one does no
work beyond two rounds of mixing.

Layout used elsewhere in the package (documented here so it stays in one
place): trial t of a Monte-Carlo run uses stream 2*t for its erasure
pattern and stream 2*t + 1 for its matrix when matrices are resampled;
stream 1 is the fixed-matrix stream, which makes the "fixed" mode matrix
identical to ``sample_regular_matrix`` called with the same seed.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z):
    """One splitmix64 finalization round on a 64-bit integer."""
    z &= MASK64
    z = (z ^ (z >> 30)) * _M1 & MASK64
    z = (z ^ (z >> 27)) * _M2 & MASK64
    return z ^ (z >> 31)


def stream_base(seed, stream):
    """Combined 64-bit base value for a (seed, stream) pair."""
    return mix64((seed & MASK64) ^ mix64(stream & MASK64))


def _mix_array(z):
    # vectorized mix64 on a uint64 ndarray; wraparound is the point here
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        return z ^ (z >> np.uint64(31))


class Stream:
    """A single named random stream with an advancing cursor.

    ``Stream(seed, stream)`` starts at counter 0.  All methods advance the
    cursor by exactly the number of raw 64-bit words they consume, so two
    implementations that make the same sequence of calls stay in lockstep.
    """

    __slots__ = ("base", "counter")

    def __init__(self, seed, stream):
        self.base = stream_base(seed, stream)
        self.counter = 0

    def next_u64(self):
        v = mix64(self.base + (self.counter + 1) * GOLDEN)
        self.counter += 1
        return v

    def next_double(self):
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def doubles(self, count):
        """Block of ``count`` uniforms as a float64 array.

        Identical to ``count`` calls of :meth:`next_double`; evaluated
        vectorized.
        """
        idx = np.arange(self.counter, self.counter + count, dtype=np.uint64)
        with np.errstate(over="ignore"):
            words = _mix_array(np.uint64(self.base) + (idx + np.uint64(1)) * np.uint64(GOLDEN))
        self.counter += count
        return (words >> np.uint64(11)) * 2.0**-53

    def randint(self, n):
        """Uniform integer in [0, n) by rejection, bias-free."""
        if n <= 0:
            raise ValueError("randint bound must be positive")
        vmin = (1 << 64) % n
        while True:
            v = self.next_u64()
            if v >= vmin:
                return v % n
