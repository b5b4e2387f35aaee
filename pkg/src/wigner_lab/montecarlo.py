"""End-to-end sampling of the protocol under configurable mistake policies.

Each trial samples Alice's record, selects the evolution keyed to it (or,
on a mistake, to the opposite record), and lets Charlie measure the joint
Hadamard-basis observable on the resulting register.

Randomness is counter-based (Philox keyed by master seed and chunk index)
so results depend only on (seed, trial index): serial and parallel
execution schedules produce bit-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import core, protocol
from .core import OutcomeDistribution
from .protocol import AliceOutcome

P_HEADS = 1.0 / 3.0

STATE_LABELS = ("AB", "ABht", "ABth")
CHARLIE_LABELS = ("ok_ok", "ok_fail", "fail_ok", "fail_fail")
TRANSFORM_LABELS = ("A_h0", "A_t01")

_CHUNK = 1 << 16

POLICY_KINDS = ("correct", "uniform", "alternating", "biased")
MODES = ("collapse", "analytic")


@dataclass(frozen=True)
class MistakePolicy:
    """Rule selecting the applied evolution, possibly mismatching Alice's record.

    ``epsilon`` is the per-trial probability of applying the evolution keyed
    to the opposite record; alternating ignores the record entirely and has
    no per-trial closed form.
    """

    kind: str
    epsilon: float | None = None

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}, expected one of {POLICY_KINDS}")
        if self.kind == "biased":
            if self.epsilon is None or not 0.0 <= self.epsilon <= 1.0:
                raise ValueError(f"biased policy needs epsilon in [0, 1], got {self.epsilon!r}")
        elif self.epsilon is not None:
            raise ValueError(f"policy {self.kind!r} does not take an epsilon")

    @classmethod
    def always_correct(cls) -> MistakePolicy:
        return cls("correct")

    @classmethod
    def uniform_random(cls) -> MistakePolicy:
        return cls("uniform")

    @classmethod
    def alternating(cls) -> MistakePolicy:
        return cls("alternating")

    @classmethod
    def biased(cls, epsilon: float) -> MistakePolicy:
        return cls("biased", float(epsilon))

    @classmethod
    def parse(cls, text: str) -> MistakePolicy:
        """Parse ``correct | uniform | alternating | biased:<eps>``."""
        if text in ("correct", "uniform", "alternating"):
            return cls(text)
        if text.startswith("biased:"):
            try:
                return cls.biased(float(text.split(":", 1)[1]))
            except ValueError as exc:
                raise ValueError(f"bad policy spec {text!r}: {exc}") from None
        raise ValueError(f"bad policy spec {text!r}, expected correct|uniform|alternating|biased:<eps>")

    @property
    def mistake_probability(self) -> float | None:
        """Per-trial mistake probability; None for alternating."""
        return {"correct": 0.0, "uniform": 0.5, "alternating": None, "biased": self.epsilon}[self.kind]

    def spec(self) -> str:
        return f"biased:{self.epsilon!r}" if self.kind == "biased" else self.kind


@dataclass(frozen=True)
class TrialConfig:
    n_trials: int
    seed: int
    policy: MistakePolicy
    mode: str = "collapse"

    def __post_init__(self):
        if self.n_trials < 0:
            raise ValueError("n_trials must be >= 0")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")


@dataclass(frozen=True)
class ProtocolTrace:
    """One trial record; ``alice_outcome`` and ``applied_transform`` are None
    in analytic mode, where Charlie measures the target state directly."""

    trial_index: int
    alice_outcome: AliceOutcome | None
    applied_transform: str | None
    resultant_state: str
    charlie_outcome: tuple[str, str]

    def __post_init__(self):
        if self.applied_transform is not None and self.alice_outcome is not None:
            matches = (self.applied_transform == "A_h0") == (self.alice_outcome is AliceOutcome.HEADS)
            if (self.resultant_state == "AB") != matches:
                raise ValueError("resultant state must be AB exactly when the transform matches the record")


@dataclass(frozen=True)
class RunResult:
    resultant_states: OutcomeDistribution
    charlie: OutcomeDistribution
    traces: list[ProtocolTrace] | None = None


@dataclass(frozen=True)
class LabelCheck:
    label: str
    frequency: float
    expected: float
    margin: float
    limit: float
    passed: bool


@dataclass(frozen=True)
class ComparisonReport:
    checks: tuple[LabelCheck, ...]
    passed: bool


@lru_cache(maxsize=None)
def _charlie_cumulative() -> dict[str, np.ndarray]:
    """Cumulative Charlie-outcome probabilities per resultant state."""
    bases = [protocol.charlie_basis("A"), protocol.charlie_basis("B")]
    states = {
        "AB": protocol.target_state(),
        "ABht": protocol.wrong_state(protocol.WrongStateLabel.ABHT),
        "ABth": protocol.wrong_state(protocol.WrongStateLabel.ABTH),
    }
    table = {}
    for label, state in states.items():
        dist = core.born_probabilities(state, bases)
        table[label] = np.cumsum([dist.probability(k) for k in CHARLIE_LABELS])
    return table


def _chunk_uniforms(seed: int, chunk_index: int, m: int) -> np.ndarray:
    key = np.array([seed, chunk_index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    return rng.random((m, 3))


def run_trials(config: TrialConfig, collect_traces: bool = False) -> RunResult:
    """Run the protocol ``config.n_trials`` times.

    Deterministic given (seed, n_trials, policy, mode); trials are
    independent and chunked, so any execution schedule yields the same
    counts and traces.
    """
    cumulative = _charlie_cumulative()
    state_counts = np.zeros(len(STATE_LABELS), dtype=np.int64)
    charlie_counts = np.zeros(len(CHARLIE_LABELS), dtype=np.int64)
    traces: list[ProtocolTrace] | None = [] if collect_traces else None

    eps = config.policy.mistake_probability
    for chunk_index, start in enumerate(range(0, config.n_trials, _CHUNK)):
        m = min(_CHUNK, config.n_trials - start)
        u = _chunk_uniforms(config.seed, chunk_index, m)
        heads = u[:, 0] < P_HEADS

        if config.mode == "analytic":
            state_idx = np.zeros(m, dtype=np.int64)
        else:
            if config.policy.kind == "alternating":
                apply_h0 = (start + np.arange(m)) % 2 == 0
            else:
                mistake = u[:, 1] < eps
                apply_h0 = heads ^ mistake
            # matching transform -> AB; heads hit by A_t01 -> ABht; tails by A_h0 -> ABth
            state_idx = np.where(apply_h0 == heads, 0, np.where(heads, 1, 2))

        charlie_idx = np.empty(m, dtype=np.int64)
        for si, label in enumerate(STATE_LABELS):
            mask = state_idx == si
            if mask.any():
                charlie_idx[mask] = np.searchsorted(cumulative[label], u[mask, 2], side="right")
        np.minimum(charlie_idx, len(CHARLIE_LABELS) - 1, out=charlie_idx)

        state_counts += np.bincount(state_idx, minlength=len(STATE_LABELS))
        charlie_counts += np.bincount(charlie_idx, minlength=len(CHARLIE_LABELS))

        if traces is not None:
            analytic = config.mode == "analytic"
            for offset in range(m):
                outcome_pair = tuple(CHARLIE_LABELS[charlie_idx[offset]].split(core.LABEL_SEP))
                traces.append(
                    ProtocolTrace(
                        trial_index=start + offset,
                        alice_outcome=None if analytic else (AliceOutcome.HEADS if heads[offset] else AliceOutcome.TAILS),
                        applied_transform=None if analytic else TRANSFORM_LABELS[0 if apply_h0[offset] else 1],
                        resultant_state=STATE_LABELS[state_idx[offset]],
                        charlie_outcome=outcome_pair,
                    )
                )

    return RunResult(
        resultant_states=OutcomeDistribution.from_counts(dict(zip(STATE_LABELS, state_counts.tolist()))),
        charlie=OutcomeDistribution.from_counts(dict(zip(CHARLIE_LABELS, charlie_counts.tolist()))),
        traces=traces,
    )


def analytic_mistake_table(policy: MistakePolicy) -> OutcomeDistribution:
    """Closed-form resultant-state distribution: (1-eps, eps/3, 2*eps/3)."""
    eps = policy.mistake_probability
    if eps is None:
        raise ValueError("alternating policy has no per-trial closed form; sample it with run_trials")
    return OutcomeDistribution.from_probabilities(
        {"AB": 1.0 - eps, "ABht": eps * P_HEADS, "ABth": eps * (1.0 - P_HEADS)}
    )


def compare_distributions(
    empirical: OutcomeDistribution,
    analytic: OutcomeDistribution,
    sigma_bound: float,
) -> ComparisonReport:
    """Per-label check |freq - p| <= sigma_bound * sqrt(p(1-p)/N)."""
    if empirical.total <= 0:
        raise ValueError("empirical distribution has no samples")
    if set(empirical.labels) != set(analytic.labels):
        raise ValueError(f"label sets differ: {sorted(empirical.labels)} vs {sorted(analytic.labels)}")
    checks = []
    for label in empirical.labels:
        p = analytic.probability(label)
        freq = empirical.probability(label)
        margin = abs(freq - p)
        limit = sigma_bound * float(np.sqrt(p * (1.0 - p) / empirical.total))
        checks.append(LabelCheck(label, freq, p, margin, limit, margin <= limit))
    return ComparisonReport(tuple(checks), all(c.passed for c in checks))
