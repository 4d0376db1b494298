"""Forward/backward conditional entropy and the reversal-gap identities.

The conditional entropy of a sequence under a context model is

    H(S) = -sum over all N-n windows of log P(next | n-symbol context)

evaluated here in count-weighted form: group the windows by their
(n+1)-tuple, multiply each distinct tuple's log-probability by its count,
and accumulate with exactly-rounded compensated summation (math.fsum). For
a stationary joint with full support on the observed tuples, the forward
total and the backward total (reversed sequence under the reversed model)
differ by exactly log p(first n-tuple) - log p(last n-tuple); theorem_check
measures the residual of that identity. delta_h applies the same comparison
to a pair of trained models, normalized per symbol, as a learnability score.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .coding import decode_tuple, encode_tuple, reverse_keys
from .errors import NonStationaryJointError, OrderMismatchError, ZeroProbabilityError
from .models import conditional_from_joint, reverse_joint, train_ngram_model
from .ngram import count_ngrams, start_marginal

LN2 = math.log(2.0)

#: Default ΔH verdict threshold, in nats per symbol.
DELTA_H_THRESHOLD = 1e-4


def _scaled(value, units):
    if units == "nats":
        return value
    if units == "bits":
        return value / LN2 if math.isfinite(value) else value
    raise ValueError(f"unknown units {units!r}")


@dataclass
class EntropyReport:
    """Total and per-symbol conditional entropy of one evaluation pass."""

    total_nats: float
    per_symbol_nats: float
    window_count: int
    order: int
    direction: str
    zero_events: list = field(default_factory=list)

    def to_dict(self, units="nats"):
        return {
            "total": _scaled(self.total_nats, units),
            "per_symbol": _scaled(self.per_symbol_nats, units),
            "window_count": self.window_count,
            "order": self.order,
            "direction": self.direction,
            "zero_events": [list(t) for t in self.zero_events],
            "units": units,
        }


@dataclass
class TheoremCheckReport:
    """Forward/backward entropy totals and the boundary-term residual."""

    h_forward: float
    h_backward: float
    boundary_term: float
    residual: float
    c_bound: float
    h1: float
    h2: float
    h1_rev: float
    h2_rev: float
    order: int
    length: int
    first_tuple: tuple
    last_tuple: tuple
    stationary: bool

    def to_dict(self, units="nats"):
        return {
            "h_forward": _scaled(self.h_forward, units),
            "h_backward": _scaled(self.h_backward, units),
            "boundary_term": _scaled(self.boundary_term, units),
            "residual": _scaled(self.residual, units),
            "c_bound": _scaled(self.c_bound, units),
            "h1": _scaled(self.h1, units),
            "h2": _scaled(self.h2, units),
            "h1_rev": _scaled(self.h1_rev, units),
            "h2_rev": _scaled(self.h2_rev, units),
            "per_symbol_gap": _scaled(
                abs(self.h_forward - self.h_backward) / self.length, units
            ),
            "order": self.order,
            "length": self.length,
            "first_tuple": list(self.first_tuple),
            "last_tuple": list(self.last_tuple),
            "stationary": self.stationary,
            "units": units,
        }


@dataclass
class DeltaHReport:
    """Per-symbol entropy difference between forward- and backward-trained models.

    Positive values mean the reversed direction was easier to fit.
    """

    delta_h_per_symbol: float
    h_forward_total: float
    h_backward_total: float
    order: int
    length: int
    k_forward: float
    k_backward: float
    threshold: float
    direction_verdict: str

    def to_dict(self, units="nats"):
        return {
            "delta_h_per_symbol": _scaled(self.delta_h_per_symbol, units),
            "h_forward_total": _scaled(self.h_forward_total, units),
            "h_backward_total": _scaled(self.h_backward_total, units),
            "order": self.order,
            "length": self.length,
            "k_forward": self.k_forward,
            "k_backward": self.k_backward,
            "threshold": _scaled(self.threshold, units),
            "direction_verdict": self.direction_verdict,
            "units": units,
        }


@dataclass
class SymmetryRow:
    key: int
    symbols: tuple
    lhs: float
    rhs: float
    abs_gap: float


@dataclass
class SymmetryReport:
    """Per-tuple comparison of forward and backward model mass.

    For each (n+1)-tuple: lhs = M(s_n | s_0..s_{n-1}) * p(s_0..s_{n-1}) and
    rhs = M_rev(s_0 | s_n..s_1) * p_rev(s_n..s_1). Identically trained model
    pairs make the two sides equal; the tuples where they diverge are the
    ones the two directions treat differently.
    """

    rows: list
    max_gap: float
    mean_gap: float
    tuple_count: int
    order: int
    convention: str = "backward-model contexts read last symbol first: (s_n..s_1)"

    def to_dict(self, units="nats"):
        # lhs/rhs are probabilities; no unit conversion applies.
        return {
            "rows": [
                {
                    "key": r.key,
                    "tuple": list(r.symbols),
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "abs_gap": r.abs_gap,
                }
                for r in self.rows
            ],
            "max_gap": self.max_gap,
            "mean_gap": self.mean_gap,
            "tuple_count": self.tuple_count,
            "order": self.order,
            "convention": self.convention,
            "units": units,
        }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["key", "tuple", "lhs", "rhs", "abs_gap"])
        for r in self.rows:
            writer.writerow([r.key, " ".join(str(s) for s in r.symbols), r.lhs, r.rhs, r.abs_gap])
        return buf.getvalue()


def _neg_log_sum(counts, probs, order, alphabet_size, keys, zero_policy):
    """-sum(counts * log(probs)) with zero handling and exact accumulation."""
    zero = probs <= 0.0
    zero_events = []
    if zero.any():
        offenders = keys[zero]
        if zero_policy == "raise":
            raise ZeroProbabilityError(decode_tuple(int(offenders[0]), order, alphabet_size))
        zero_events = [decode_tuple(int(k), order, alphabet_size) for k in offenders[:32]]
        return math.inf, zero_events
    terms = counts.astype(np.float64) * np.log(probs)
    return -math.fsum(terms), zero_events


def conditional_entropy(seq, model, n=None, direction="forward", zero_policy="raise"):
    """Evaluate a conditional model on every window of a sequence.

    `zero_policy` controls zero-probability events: "raise" names the first
    offending tuple, "report" returns +inf with the offenders listed in
    zero_events (capped at 32 tuples).
    """
    if n is None:
        n = model.order
    elif n != model.order:
        raise OrderMismatchError(f"requested order {n} but model has order {model.order}")
    if model.alphabet_size != seq.alphabet.size:
        raise OrderMismatchError(
            f"model alphabet size {model.alphabet_size} does not match "
            f"sequence alphabet size {seq.alphabet.size}"
        )
    if len(seq) < n + 1:
        raise ValueError(f"sequence of length {len(seq)} is too short for order {n}")
    table = count_ngrams(seq, n + 1)
    probs = model.tuple_probs(table.keys)
    total, zero_events = _neg_log_sum(
        table.counts, probs, n + 1, seq.alphabet.size, table.keys, zero_policy
    )
    windows = table.window_total
    return EntropyReport(
        total_nats=total,
        per_symbol_nats=total / windows,
        window_count=windows,
        order=n,
        direction=direction,
        zero_events=zero_events,
    )


def decompose_entropy(seq, joint):
    """Split the conditional entropy against a joint into its two sums.

    h1 = -sum_t count(t) * log J(t) over observed (n+1)-tuples t;
    h2 = +sum_t count_start(t) * log J_marginal(t) over their n-prefixes.
    h1 + h2 equals the conditional entropy under the conditioned joint. h1
    is invariant under jointly reversing the sequence and the joint, which
    is why the forward/backward gap lives entirely in h2.
    """
    m = joint.order
    if joint.alphabet_size != seq.alphabet.size:
        raise OrderMismatchError(
            f"joint alphabet size {joint.alphabet_size} does not match "
            f"sequence alphabet size {seq.alphabet.size}"
        )
    if len(seq) < m:
        raise ValueError(f"sequence of length {len(seq)} is too short for order-{m} tuples")
    table = count_ngrams(seq, m)
    probs = joint.probs_for(table.keys)
    h1, _ = _neg_log_sum(table.counts, probs, m, seq.alphabet.size, table.keys, "raise")

    prefixes = start_marginal(table)
    marg = joint.start_marginal()
    marg_probs = marg.probs_for(prefixes.keys)
    h2_neg, _ = _neg_log_sum(
        prefixes.counts, marg_probs, m - 1, seq.alphabet.size, prefixes.keys, "raise"
    )
    return h1, -h2_neg


def theorem_check(seq, joint, report_only=False):
    """Measure the forward/backward entropy gap against the boundary term.

    Computes H_forward under the joint's conditional, H_backward under the
    reversed joint's conditional on the reversed sequence, and compares
    their difference to log p(first n-tuple) - log p(last n-tuple). For a
    stationary joint the residual is zero up to floating-point accumulation.
    Non-stationary joints are refused unless report_only, because the
    identity is not guaranteed for them; report_only computes everything
    anyway for empirical plug-in runs.
    """
    n = joint.order - 1
    if len(seq) < n + 1:
        raise ValueError(f"sequence of length {len(seq)} is too short for order {n}")
    if not joint.stationary and not report_only:
        raise NonStationaryJointError(
            "joint's leading and trailing marginals disagree; the reversal identity "
            "is not guaranteed (rerun with report_only to compute the residual anyway)"
        )
    rev_joint = reverse_joint(joint)
    h_fwd = conditional_entropy(seq, conditional_from_joint(joint), n, direction="forward")
    h_bwd = conditional_entropy(
        seq.reverse(), conditional_from_joint(rev_joint), n, direction="backward"
    )

    marg = joint.start_marginal()
    first = seq.tuple_at(0, n)
    last = seq.tuple_at(len(seq) - n, n)
    p_first = marg.prob(encode_tuple(first, seq.alphabet.size))
    p_last = marg.prob(encode_tuple(last, seq.alphabet.size))
    if p_first <= 0.0:
        raise ZeroProbabilityError(first)
    if p_last <= 0.0:
        raise ZeroProbabilityError(last)
    boundary = math.log(p_first) - math.log(p_last)
    residual = (h_fwd.total_nats - h_bwd.total_nats) - boundary

    positive = [p for _, p in marg.items()]
    c_bound = math.log(max(positive) / min(positive)) if positive else 0.0

    h1, h2 = decompose_entropy(seq, joint)
    h1_rev, h2_rev = decompose_entropy(seq.reverse(), rev_joint)
    return TheoremCheckReport(
        h_forward=h_fwd.total_nats,
        h_backward=h_bwd.total_nats,
        boundary_term=boundary,
        residual=residual,
        c_bound=c_bound,
        h1=h1,
        h2=h2,
        h1_rev=h1_rev,
        h2_rev=h2_rev,
        order=n,
        length=len(seq),
        first_tuple=first,
        last_tuple=last,
        stationary=joint.stationary,
    )


def delta_h(seq, n, k_smooth, k_forward=None, k_backward=None, threshold=DELTA_H_THRESHOLD):
    """Train matched forward/backward n-gram models and compare their losses.

    delta = (H_forward - H_backward) / N, so positive values mean the model
    fit the reversed direction more tightly. The verdict applies the (always
    caller-overridable) threshold in nats per symbol.
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    kf = k_smooth if k_forward is None else k_forward
    kb = k_smooth if k_backward is None else k_backward
    fwd = train_ngram_model(seq, n, kf, direction="forward")
    rev_seq = seq.reverse()
    bwd = train_ngram_model(rev_seq, n, kb, direction="backward")
    h_fwd = conditional_entropy(seq, fwd, n, direction="forward")
    h_bwd = conditional_entropy(rev_seq, bwd, n, direction="backward")
    delta = (h_fwd.total_nats - h_bwd.total_nats) / len(seq)
    if delta > threshold:
        verdict = "backward-easier"
    elif delta < -threshold:
        verdict = "forward-easier"
    else:
        verdict = "indistinguishable"
    return DeltaHReport(
        delta_h_per_symbol=delta,
        h_forward_total=h_fwd.total_nats,
        h_backward_total=h_bwd.total_nats,
        order=n,
        length=len(seq),
        k_forward=kf,
        k_backward=kb,
        threshold=threshold,
        direction_verdict=verdict,
    )


def symmetry_check(model, model_rev, joint, top_k=20, marginals=None):
    """Compare forward and backward model mass tuple by tuple.

    Both models must share the joint's context order; the joint supplies the
    unconditional n-tuple probabilities for each side (its leading marginal
    forward, its reversal's leading marginal backward). Pass `marginals` as
    a (p_forward, p_backward) pair of order-n distributions to substitute a
    better estimate of the unconditional probabilities, e.g. full n-gram
    frequencies when the joint itself is an empirical window table. Rows
    come back sorted by gap, largest first, truncated to top_k; max and mean
    cover all tuples with positive joint mass.
    """
    n = model.order
    if model_rev.order != n or joint.order != n + 1:
        raise OrderMismatchError(
            f"orders disagree: forward {model.order}, backward {model_rev.order}, "
            f"joint {joint.order} (need n, n, n+1)"
        )
    if not (model.alphabet_size == model_rev.alphabet_size == joint.alphabet_size):
        raise OrderMismatchError("alphabet sizes disagree")
    a = joint.alphabet_size
    if marginals is None:
        p_fwd = joint.start_marginal()
        p_bwd = reverse_joint(joint).start_marginal()
    else:
        p_fwd, p_bwd = marginals
        if p_fwd.order != n or p_bwd.order != n:
            raise OrderMismatchError("explicit marginals must have the models' context order")

    rows = []
    gaps = []
    span = a**n
    for key, _ in joint.items():
        ctx, s_next = key // a, key % a
        s_first, tail = key // span, key % span
        rev_ctx = int(reverse_keys(np.asarray([tail], dtype=np.uint64), n, a)[0])
        lhs = model.prob(ctx, s_next) * p_fwd.prob(ctx)
        rhs = model_rev.prob(rev_ctx, s_first) * p_bwd.prob(rev_ctx)
        gap = abs(lhs - rhs)
        rows.append(SymmetryRow(key, decode_tuple(key, n + 1, a), lhs, rhs, gap))
        gaps.append(gap)
    rows.sort(key=lambda r: (-r.abs_gap, r.key))
    return SymmetryReport(
        rows=rows[: max(int(top_k), 0)],
        max_gap=max(gaps, default=0.0),
        mean_gap=(math.fsum(gaps) / len(gaps)) if gaps else 0.0,
        tuple_count=len(gaps),
        order=n,
    )
