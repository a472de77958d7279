"""SPRT stopping rules driving trials to a decision.

The adaptive trial keeps allocating by the max-count-stream rule and
stops when the SPRT statistic over the active (U) stream crosses a Wald
boundary.  Internally each stream stores its cumulative ``log(f0/f1)``;
the stopping statistic is the negation, ``T = sum log(f1(U_i)/f0(U_i))``:
continue while ``b < T < a``, accept K1 when ``T >= a``, accept K0 when
``T <= b`` (boundary hits inclusive, no overshoot correction).

The classical baseline samples both populations alternately and applies
the same boundaries to the statistic accumulated over the X stream only;
both its per-round and total-draw accounting are reported (the published
operating characteristics track rounds, while total draws is the figure
relevant to inferior-population exposure).

Outcome accounting
------------------
A trial is recorded as a *correct selection* when it certifies the truly
superior population:

* adaptive: the trial stops by accepting K0 (the tracked U stream follows
  f0) while that stream really is the superior one.  A stop that labels
  the tracked stream inferior (accept K1) counts as an incorrect
  selection even when that label happens to be true of the stream, since
  the procedure then failed to certify a superior population.  This is
  the convention the published operating characteristics follow; the
  probability of correct selection is therefore visibly below ``1 -
  alpha`` at loose error targets and climbs toward 1 as the targets
  shrink.
* classical: the statistic is a verdict on the X stream, so correctness
  follows :func:`classify_outcome` directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .allocation import (
    Hypothesis,
    StreamId,
    TrialState,
    TrialStreams,
    active_llr,
    allocate_next,
    apply_observation,
    init_trial,
    superior_stream,
    inferior_stream,
)
from .analytics import Thresholds

DEFAULT_CAP = 10_000_000


class Decision(enum.Enum):
    CONTINUE = "continue"
    ACCEPT_K0 = "accept_K0"  # U-stream follows f0
    ACCEPT_K1 = "accept_K1"  # U-stream follows f1


class NonTerminationError(RuntimeError):
    """A trial exceeded its draw cap without crossing a boundary.

    Diagnostic only: boundary crossing is almost-surely certain, so this
    trips on bugs or absurd caps.  Carries the partial state (adaptive)
    or the running statistic (classical).
    """

    def __init__(self, message: str, state=None):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class TrialOutcome:
    """Terminal record of a single trial."""

    decision: Decision
    deciding_stream: StreamId
    correct: bool
    n_total: int
    n_inferior: int
    steps_statistic: int


def sprt_decision(state: TrialState, t: Thresholds) -> Decision:
    """Boundary test for the adaptive statistic ``T = -active_llr``."""
    stat = -active_llr(state)
    if stat >= t.a:
        return Decision.ACCEPT_K1
    if stat <= t.b:
        return Decision.ACCEPT_K0
    return Decision.CONTINUE


def classify_outcome(decision: Decision, deciding_stream: StreamId, truth: Hypothesis) -> bool:
    """True iff the decision's verdict on the deciding stream is true.

    Accepting K0 declares the deciding stream superior; accepting K1
    declares it inferior (hence the other stream superior).
    """
    if decision is Decision.CONTINUE:
        raise ValueError("cannot classify an undecided trial")
    declared_superior = deciding_stream if decision is Decision.ACCEPT_K0 else deciding_stream.other
    return declared_superior is superior_stream(truth)


def run_adaptive_trial(
    pair,
    truth: Hypothesis,
    t: Thresholds,
    cap: int = DEFAULT_CAP,
    *,
    streams: TrialStreams | None = None,
    seed: int | None = None,
) -> TrialOutcome:
    """Run one adaptive trial to its SPRT decision.

    Supply either ready-made ``streams`` or a ``seed`` from which the
    trial's three substreams are derived.
    """
    if cap < 2:
        raise ValueError(f"cap must be >= 2, got {cap}")
    if streams is None:
        if seed is None:
            raise ValueError("provide either streams or a seed")
        streams = TrialStreams.from_seed(pair, truth, seed)
    state = init_trial(streams)
    while True:
        decision = sprt_decision(state, t)
        if decision is not Decision.CONTINUE:
            break
        if state.step >= cap:
            raise NonTerminationError(
                f"no boundary crossing within {cap} draws", state=state
            )
        apply_observation(state, allocate_next(state, streams), streams)
    deciding = state.active
    correct = decision is Decision.ACCEPT_K0 and deciding is superior_stream(truth)
    n_inferior = state.n_y if inferior_stream(truth) is StreamId.Y else state.n_x
    return TrialOutcome(
        decision=decision,
        deciding_stream=deciding,
        correct=correct,
        n_total=state.step,
        n_inferior=n_inferior,
        steps_statistic=state.n_x if deciding is StreamId.X else state.n_y,
    )


def run_classical_trial(
    pair,
    truth: Hypothesis,
    t: Thresholds,
    cap: int = DEFAULT_CAP,
    *,
    streams: TrialStreams | None = None,
    seed: int | None = None,
) -> TrialOutcome:
    """Run one classical alternating-sampling trial.

    Each round draws one observation from both populations; the statistic
    ``Z_n = sum log(f1(X_i)/f0(X_i))`` accumulates over the X stream only
    and the trial stops when it leaves ``(b, a)``.  ``steps_statistic``
    is the number of rounds n, ``n_total = 2n`` (both streams are sampled
    every round) and ``n_inferior = n`` (the inferior population is
    sampled once per round, whichever stream it is).
    """
    if cap < 2:
        raise ValueError(f"cap must be >= 2, got {cap}")
    if streams is None:
        if seed is None:
            raise ValueError("provide either streams or a seed")
        streams = TrialStreams.from_seed(pair, truth, seed)
    source = streams.source(StreamId.X)
    z_running = 0.0
    rounds = 0
    while True:
        _, z_block = source.next_block()
        # statistic uses log(f1/f0) over X: the negated stored LLRs
        path = z_running - np.cumsum(z_block)
        crossed = np.flatnonzero((path >= t.a) | (path <= t.b))
        if crossed.size:
            k = int(crossed[0])
            rounds += k + 1
            stat = float(path[k])
            decision = Decision.ACCEPT_K1 if stat >= t.a else Decision.ACCEPT_K0
            break
        z_running = float(path[-1])
        rounds += len(z_block)
        if rounds >= cap:
            raise NonTerminationError(
                f"no boundary crossing within {cap} rounds", state=z_running
            )
    return TrialOutcome(
        decision=decision,
        deciding_stream=StreamId.X,
        correct=classify_outcome(decision, StreamId.X, truth),
        n_total=2 * rounds,
        n_inferior=rounds,
        steps_statistic=rounds,
    )
