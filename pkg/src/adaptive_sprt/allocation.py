"""LLR-driven adaptive allocation between two data streams.

Two independent observation streams X and Y are sampled one draw at a
time.  The stream currently holding the larger sample count is the
*active* stream; its cumulative log-likelihood ratio ``sum log(f0/f1)``
is the allocation statistic S.  The next draw goes to

* the active (max-count) stream when S > 0,
* the min-count stream when S < 0,
* a fair-coin stream when S == 0 exactly.

Equal counts are a tie: the active stream is then chosen by a fair coin,
re-tossed on every new tie (ties last a single step since counts change
by one per draw).  The zero test in the allocation rule is exact floating
equality on purpose: for continuous models S = 0 has probability zero,
while for lattice statistics (Poisson) exact zeros are genuine and an
epsilon band would distort the strict inequalities on either side.

Each stream draws from its own independently seeded substream, and the
k-th observation of a stream is always the k-th draw of that substream,
whatever the allocation decisions were.  This keeps every stream's data
i.i.d. conditionally on the observed counts and makes whole trials
bit-reproducible from a seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .distributions import DistributionSpec, HypothesisPair

# buffered draws start small (most trials stop within a few dozen draws)
# and grow geometrically so long trials amortize vectorized sampling
_BLOCK_INITIAL = 64
_BLOCK_MAX = 4096


class StreamId(enum.Enum):
    X = "X"
    Y = "Y"

    @property
    def other(self) -> "StreamId":
        return StreamId.Y if self is StreamId.X else StreamId.X


class Hypothesis(enum.Enum):
    """Which stream truly carries the superior density f0."""

    H0 = "H0"  # X ~ f0, Y ~ f1
    H1 = "H1"  # X ~ f1, Y ~ f0


def superior_stream(truth: Hypothesis) -> StreamId:
    return StreamId.X if truth is Hypothesis.H0 else StreamId.Y


def inferior_stream(truth: Hypothesis) -> StreamId:
    return superior_stream(truth).other


class StreamSource:
    """Buffered draws from one stream's true density, with per-draw LLRs.

    Draws are produced in blocks for speed; the visible sequence is
    bit-identical to scalar draws from the same substream.
    """

    __slots__ = ("spec", "_pair", "_rng", "_obs", "_z", "_pos", "_block")

    def __init__(self, spec: DistributionSpec, pair: HypothesisPair, rng: np.random.Generator):
        self.spec = spec
        self._pair = pair
        self._rng = rng
        self._obs = np.empty(0)
        self._z = np.empty(0)
        self._pos = 0
        self._block = _BLOCK_INITIAL

    def _refill(self):
        self._obs = self.spec.sample_block(self._rng, self._block)
        self._z = self._pair.llr(self._obs)
        self._pos = 0
        self._block = min(2 * self._block, _BLOCK_MAX)

    def next(self) -> tuple[float, float]:
        """One observation and its log-likelihood ratio log(f0/f1)."""
        if self._pos >= len(self._obs):
            self._refill()
        i = self._pos
        self._pos = i + 1
        return float(self._obs[i]), float(self._z[i])

    def next_block(self) -> tuple[np.ndarray, np.ndarray]:
        """All remaining buffered draws (refilling first if empty).

        Used by vectorized consumers; interleaving next() and
        next_block() preserves the draw sequence.
        """
        if self._pos >= len(self._obs):
            self._refill()
        obs = self._obs[self._pos:]
        z = self._z[self._pos:]
        self._pos = len(self._obs)
        return obs, z


class TrialStreams:
    """The three random sources owned by one trial: X draws, Y draws, coins."""

    __slots__ = ("pair", "truth", "_x", "_y", "_coin")

    def __init__(
        self,
        pair: HypothesisPair,
        truth: Hypothesis,
        x_rng: np.random.Generator,
        y_rng: np.random.Generator,
        coin_rng: np.random.Generator,
    ):
        self.pair = pair
        self.truth = truth
        x_spec = pair.f0 if truth is Hypothesis.H0 else pair.f1
        y_spec = pair.f1 if truth is Hypothesis.H0 else pair.f0
        self._x = StreamSource(x_spec, pair, x_rng)
        self._y = StreamSource(y_spec, pair, y_rng)
        self._coin = coin_rng

    @classmethod
    def from_seed_sequence(
        cls, pair: HypothesisPair, truth: Hypothesis, seq: np.random.SeedSequence
    ) -> "TrialStreams":
        kids = seq.spawn(3)
        return cls(pair, truth, *(np.random.Generator(np.random.PCG64(k)) for k in kids))

    @classmethod
    def from_seed(cls, pair: HypothesisPair, truth: Hypothesis, seed: int) -> "TrialStreams":
        return cls.from_seed_sequence(pair, truth, np.random.SeedSequence(seed))

    def source(self, stream: StreamId) -> StreamSource:
        return self._x if stream is StreamId.X else self._y

    def coin(self) -> StreamId:
        return StreamId.X if self._coin.random() < 0.5 else StreamId.Y


@dataclass(slots=True)
class TrialState:
    """Live state of one adaptive trial.

    ``l_x``/``l_y`` are the per-stream cumulative sums of log(f0/f1);
    ``active`` is the current max-count (statistic-carrying) stream,
    re-derived after every draw with a fresh coin on ties.
    """

    n_x: int
    n_y: int
    l_x: float
    l_y: float
    active: StreamId
    step: int


def init_trial(streams: TrialStreams) -> TrialState:
    """Draw one observation from each stream; the initial tie is coin-broken."""
    _, zx = streams.source(StreamId.X).next()
    _, zy = streams.source(StreamId.Y).next()
    return TrialState(n_x=1, n_y=1, l_x=zx, l_y=zy, active=streams.coin(), step=2)


def active_llr(state: TrialState) -> float:
    """The allocation statistic S: the active stream's cumulative LLR."""
    return state.l_x if state.active is StreamId.X else state.l_y


def allocate_next(state: TrialState, streams: TrialStreams) -> StreamId:
    """Choose the stream for the next draw (rules i/ii/iii above)."""
    s = state.l_x if state.active is StreamId.X else state.l_y
    if s > 0.0:
        return state.active
    if s < 0.0:
        return state.active.other
    return streams.coin()


def apply_observation(state: TrialState, stream: StreamId, streams: TrialStreams) -> TrialState:
    """Draw from ``stream``, fold into the state, and refresh the active stream."""
    _, z = streams.source(stream).next()
    if stream is StreamId.X:
        state.n_x += 1
        state.l_x += z
    else:
        state.n_y += 1
        state.l_y += z
    state.step += 1
    if state.n_x > state.n_y:
        state.active = StreamId.X
    elif state.n_y > state.n_x:
        state.active = StreamId.Y
    else:
        state.active = streams.coin()
    return state
