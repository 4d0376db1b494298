"""Joint and conditional probability models over symbol tuples.

Exact models come from a declared joint distribution of (n+1)-tuples;
learned models are add-k smoothed n-gram estimators trained on a sequence.
Both satisfy the same contract: P(next symbol | n-symbol context) with every
reachable context row summing to 1.
"""

import json
import math

import numpy as np

from .coding import check_capacity, decode_tuple, encode_tuple, reverse_keys
from .errors import ModelFormatError, ZeroContextError
from .ngram import count_ngrams, start_marginal

# Joints at or below this many cells are stored as dense arrays.
DENSE_LIMIT = 2**24

NORMALIZATION_TOL = 1e-9
STATIONARY_TOL = 1e-12


class JointTupleDistribution:
    """Probability table over m-tuples, dense or sparse by size.

    A joint is stationary when its leading and trailing (m-1)-marginals
    coincide, i.e. tuple probabilities do not depend on window position.
    """

    def __init__(self, order, alphabet_size, probs, stationary=None):
        check_capacity(alphabet_size, order)
        self.order = order
        self.alphabet_size = alphabet_size
        if isinstance(probs, dict):
            self._dense = False
            self._probs = {int(k): float(v) for k, v in probs.items() if v != 0.0}
        else:
            probs = np.ascontiguousarray(probs, dtype=np.float64)
            if probs.shape != (alphabet_size**order,):
                raise ValueError("dense joint must have alphabet_size**order entries")
            self._dense = True
            self._probs = probs
        total = self.total()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"joint probabilities sum to {total!r}, not 1")
        if self._min() < 0.0:
            raise ValueError("joint probabilities must be nonnegative")
        self._stationary = stationary

    @classmethod
    def from_counts(cls, table):
        """Empirical plug-in joint: counts / window_total.

        Renormalized by the floating-point total so the stored probabilities
        sum to 1 up to a final rounding, whatever the table size.
        """
        total = float(table.window_total)
        if int(table.alphabet_size) ** table.order <= DENSE_LIMIT:
            probs = np.zeros(table.alphabet_size**table.order)
            probs[table.keys] = table.counts / total
            probs /= probs.sum()
        else:
            raw = {int(k): int(c) / total for k, c in zip(table.keys, table.counts)}
            s = math.fsum(raw.values())
            probs = {k: v / s for k, v in raw.items()}
        return cls(table.order, table.alphabet_size, probs)

    def _min(self):
        if self._dense:
            return float(self._probs.min()) if self._probs.size else 0.0
        return min(self._probs.values(), default=0.0)

    def total(self):
        if self._dense:
            return float(np.sum(self._probs))
        return float(sum(self._probs.values()))

    def prob(self, key):
        if self._dense:
            return float(self._probs[int(key)])
        return self._probs.get(int(key), 0.0)

    def probs_for(self, keys):
        """Probabilities for an array of tuple keys, zeros where absent."""
        keys = np.asarray(keys, dtype=np.uint64)
        if self._dense:
            return self._probs[keys.astype(np.int64)]
        return np.array([self._probs.get(int(k), 0.0) for k in keys])

    def items(self):
        """(key, prob) for every entry with positive probability."""
        if self._dense:
            (nz,) = np.nonzero(self._probs)
            for k in nz:
                yield int(k), float(self._probs[k])
        else:
            for k in sorted(self._probs):
                yield k, self._probs[k]

    def start_marginal(self):
        """Marginal over the leading (m-1)-tuple."""
        return self._marginal(leading=True)

    def end_marginal(self):
        """Marginal over the trailing (m-1)-tuple."""
        return self._marginal(leading=False)

    def _marginal(self, leading):
        a = self.alphabet_size
        if self.order == 0:
            raise ValueError("order-0 joint has no marginal")
        if self._dense:
            grid = self._probs.reshape(a ** (self.order - 1), a) if leading else \
                self._probs.reshape(a, a ** (self.order - 1))
            marg = grid.sum(axis=1) if leading else grid.sum(axis=0)
        else:
            marg = {}
            span = a ** (self.order - 1)
            for k, v in self._probs.items():
                t = k // a if leading else k % span
                marg[t] = marg.get(t, 0.0) + v
        return JointTupleDistribution(self.order - 1, a, marg)

    @property
    def stationary(self):
        if self._stationary is None:
            self._stationary = self._check_stationary()
        return self._stationary

    def _check_stationary(self):
        if self.order <= 1:
            return True
        lead, trail = self.start_marginal(), self.end_marginal()
        if self._dense:
            return float(np.max(np.abs(lead._probs - trail._probs))) <= STATIONARY_TOL
        keys = set(lead._probs) | set(trail._probs)
        return all(abs(lead.prob(k) - trail.prob(k)) <= STATIONARY_TOL for k in keys)

    def __repr__(self):
        kind = "dense" if self._dense else "sparse"
        return (
            f"JointTupleDistribution(order={self.order}, "
            f"alphabet_size={self.alphabet_size}, {kind})"
        )


def reverse_joint(joint):
    """The same distribution over reversed tuples: out[rev(t)] = joint[t].

    An involution; swapping leading and trailing marginals preserves the
    stationarity property.
    """
    a, m = joint.alphabet_size, joint.order
    if joint._dense:
        idx = reverse_keys(np.arange(a**m, dtype=np.uint64), m, a)
        probs = np.empty_like(joint._probs)
        probs[idx] = joint._probs
    else:
        keys = np.fromiter(joint._probs.keys(), dtype=np.uint64, count=len(joint._probs))
        rev = reverse_keys(keys, m, a)
        probs = {int(r): joint._probs[int(k)] for r, k in zip(rev, keys)}
    return JointTupleDistribution(m, a, probs, stationary=joint._stationary)


class ConditionalModel:
    """Contract for P(next symbol | n-symbol context).

    `context` arguments accept either a tuple of symbol ids or its integer
    key. Rows over reachable contexts sum to 1; querying a context with zero
    mass raises ZeroContextError.
    """

    order = None
    alphabet_size = None
    direction = None

    def _context_key(self, context):
        if isinstance(context, (tuple, list)):
            return encode_tuple(context, self.alphabet_size)
        return int(context)

    def prob(self, context, symbol):
        raise NotImplementedError

    def row(self, context):
        """Probabilities of every next symbol for one context."""
        return np.array([self.prob(context, s) for s in range(self.alphabet_size)])

    def tuple_probs(self, keys):
        """Conditional probabilities for an array of (n+1)-tuple keys."""
        a = self.alphabet_size
        out = np.empty(len(keys), dtype=np.float64)
        for i, key in enumerate(keys):
            key = int(key)
            out[i] = self.prob(key // a, key % a)
        return out

    def _decode_context(self, context_key):
        return decode_tuple(context_key, self.order, self.alphabet_size)


class TabularConditional(ConditionalModel):
    """Conditional probabilities held in an explicit table.

    Dense storage (cells indexed by the (n+1)-tuple key) when the tuple space
    is small, a sparse dict above that. `reachable` marks contexts with
    positive mass; everything else errors on query.
    """

    def __init__(self, order, alphabet_size, table, reachable, direction=None):
        check_capacity(alphabet_size, order + 1)
        self.order = order
        self.alphabet_size = alphabet_size
        self.direction = direction
        if isinstance(table, dict):
            self._dense = False
            self._table = {int(k): float(v) for k, v in table.items()}
            self._reachable = frozenset(int(c) for c in reachable)
        else:
            self._dense = True
            self._table = np.ascontiguousarray(table, dtype=np.float64)
            self._reachable = np.ascontiguousarray(reachable, dtype=bool)

    @classmethod
    def uniform(cls, order, alphabet_size):
        """Every context maps uniformly onto the alphabet."""
        n_cells = alphabet_size ** (order + 1)
        if n_cells <= DENSE_LIMIT:
            return cls(
                order,
                alphabet_size,
                np.full(n_cells, 1.0 / alphabet_size),
                np.ones(alphabet_size**order, dtype=bool),
                direction="uniform",
            )
        raise ValueError("uniform table too large for dense storage")

    def _is_reachable(self, context_key):
        if self._dense:
            return bool(self._reachable[context_key])
        return context_key in self._reachable

    def prob(self, context, symbol):
        ctx = self._context_key(context)
        if not self._is_reachable(ctx):
            raise ZeroContextError(self._decode_context(ctx))
        key = ctx * self.alphabet_size + int(symbol)
        if self._dense:
            return float(self._table[key])
        return self._table.get(key, 0.0)

    def tuple_probs(self, keys):
        keys = np.asarray(keys, dtype=np.uint64)
        contexts = keys // np.uint64(self.alphabet_size)
        if self._dense:
            bad = ~self._reachable[contexts.astype(np.int64)]
            if bad.any():
                ctx = int(contexts[int(np.argmax(bad))])
                raise ZeroContextError(self._decode_context(ctx))
            return self._table[keys.astype(np.int64)]
        out = np.empty(keys.size, dtype=np.float64)
        for i, (key, ctx) in enumerate(zip(keys, contexts)):
            if int(ctx) not in self._reachable:
                raise ZeroContextError(self._decode_context(int(ctx)))
            out[i] = self._table.get(int(key), 0.0)
        return out

    def reachable_contexts(self):
        if self._dense:
            return [int(c) for c in np.nonzero(self._reachable)[0]]
        return sorted(self._reachable)


def conditional_from_joint(joint):
    """Condition an order-(n+1) joint on its leading n-tuple.

    prob(t, s) = joint[(t, s)] / marginal[t]; contexts with zero marginal are
    unreachable.
    """
    if joint.order < 1:
        raise ValueError("conditioning requires a joint of order >= 1")
    a = joint.alphabet_size
    n = joint.order - 1
    marg = joint.start_marginal()
    if joint._dense:
        m = marg._probs
        denom = np.repeat(m, a)
        table = np.zeros_like(joint._probs)
        np.divide(joint._probs, denom, out=table, where=denom > 0.0)
        return TabularConditional(n, a, table, m > 0.0, direction="exact")
    table, reachable = {}, set()
    for key, p in joint._probs.items():
        table[key] = p / marg.prob(key // a)
        reachable.add(key // a)
    return TabularConditional(n, a, table, reachable, direction="exact")


class NGramModel(ConditionalModel):
    """Add-k smoothed n-gram estimator backed by exact count tables.

    prob(t, s) = (count(t.s) + k) / (count_start(t) + k * A), where
    count_start(t) counts the (n+1)-windows beginning with t. With k = 0 this
    is the maximum-likelihood plug-in and unseen contexts error on query.
    """

    def __init__(self, counts, context_totals, k_smooth, direction="forward"):
        if context_totals.order != counts.order - 1:
            raise ValueError("context totals must be the start marginal of the counts")
        if k_smooth < 0:
            raise ValueError(f"smoothing constant must be >= 0, got {k_smooth}")
        self.order = counts.order - 1
        self.alphabet_size = counts.alphabet_size
        self.counts = counts
        self.context_totals = context_totals
        self.k_smooth = float(k_smooth)
        self.direction = direction

    def prob(self, context, symbol):
        ctx = self._context_key(context)
        total = self.context_totals.get(ctx)
        if total == 0 and self.k_smooth == 0.0:
            raise ZeroContextError(self._decode_context(ctx))
        c = self.counts.get(ctx * self.alphabet_size + int(symbol))
        return (c + self.k_smooth) / (total + self.k_smooth * self.alphabet_size)

    def tuple_probs(self, keys):
        keys = np.asarray(keys, dtype=np.uint64)
        contexts = keys // np.uint64(self.alphabet_size)
        c = _lookup(self.counts, keys)
        totals = _lookup(self.context_totals, contexts)
        if self.k_smooth == 0.0 and (totals == 0).any():
            ctx = int(contexts[int(np.argmax(totals == 0))])
            raise ZeroContextError(self._decode_context(ctx))
        return (c + self.k_smooth) / (totals + self.k_smooth * self.alphabet_size)


def _lookup(table, keys):
    """Vectorized NGramTable.get over an array of keys (0 where absent)."""
    idx = np.searchsorted(table.keys, keys)
    idx_c = np.minimum(idx, len(table.keys) - 1) if len(table.keys) else idx
    found = np.zeros(keys.shape, dtype=np.int64)
    if len(table.keys):
        hit = table.keys[idx_c] == keys
        found[hit] = table.counts[idx_c[hit]]
    return found


def train_ngram_model(seq, n, k_smooth, direction="forward"):
    """Fit an add-k n-gram model on a sequence (needs N >= n + 1)."""
    if len(seq) < n + 1:
        raise ValueError(f"sequence of length {len(seq)} cannot fit context order {n}")
    counts = count_ngrams(seq, n + 1)
    return NGramModel(counts, start_marginal(counts), k_smooth, direction=direction)


def bayes_reverse_conditional(fwd, context_marginals):
    """Reverse a conditional model through Bayes' rule.

    Given fwd = P(s_n | s_0..s_{n-1}) and the n-tuple marginal p, builds the
    model predicting the previous symbol from the following n:

        rev(s_0 | s_n..s_1) = fwd(s_n | s_0..s_{n-1}) * p(s_0..s_{n-1})
                              / p(s_1..s_n)

    with p(s_1..s_n) recovered by summing the numerator over s_0. The
    returned model's contexts are in reversed order (s_n first), the same
    convention as a model trained on the reversed sequence.
    """
    n, a = fwd.order, fwd.alphabet_size
    if isinstance(context_marginals, JointTupleDistribution):
        if context_marginals.order != n:
            raise ValueError("context marginals must have the model's context order")
        marg_items = list(context_marginals.items())
    else:
        marg_items = sorted((int(k), float(v)) for k, v in context_marginals.items() if v > 0.0)

    span = a ** max(n - 1, 0)
    weights = {}  # (n+1)-tuple key -> fwd(s_n | ctx) * p(ctx)
    denom = {}  # tail key (s_1..s_n) -> p(s_1..s_n)
    for ctx, p_ctx in marg_items:
        tail_head = (ctx % span) if n >= 1 else 0
        for s in range(a):
            w = fwd.prob(ctx, s) * p_ctx
            if w == 0.0:
                continue
            key = ctx * a + s
            tail = tail_head * a + s if n >= 1 else 0
            weights[key] = w
            denom[tail] = denom.get(tail, 0.0) + w

    table, reachable = {}, {}
    for key, w in weights.items():
        s0 = key // (a**n)
        tail = key % (a**n)
        rev_ctx = int(reverse_keys(np.asarray([tail], dtype=np.uint64), n, a)[0])
        table[rev_ctx * a + s0] = w / denom[tail]
        reachable[rev_ctx] = True

    if a ** (n + 1) <= DENSE_LIMIT:
        dense = np.zeros(a ** (n + 1))
        for key, v in table.items():
            dense[key] = v
        mask = np.zeros(a**n, dtype=bool)
        mask[list(reachable)] = True
        return TabularConditional(n, a, dense, mask, direction="bayes-reverse")
    return TabularConditional(n, a, table, set(reachable), direction="bayes-reverse")


def save_model(obj, path):
    """Serialize a joint or a tabular conditional model to JSON."""
    a = obj.alphabet_size
    if isinstance(obj, JointTupleDistribution):
        entries = [
            {"key": k, "tuple": list(decode_tuple(k, obj.order, a)), "prob": p}
            for k, p in obj.items()
        ]
        doc = {"order": obj.order, "alphabet_size": a, "kind": "joint", "entries": entries}
    elif isinstance(obj, ConditionalModel):
        entries = []
        if isinstance(obj, TabularConditional):
            contexts = obj.reachable_contexts()
        else:
            contexts = sorted({k for k, _ in obj.context_totals.items()})
        for ctx in contexts:
            for s in range(a):
                p = obj.prob(ctx, s)
                if p == 0.0:
                    continue
                entries.append(
                    {
                        "context_key": ctx,
                        "symbol": s,
                        "tuple": list(decode_tuple(ctx, obj.order, a)) + [s],
                        "prob": p,
                    }
                )
        doc = {"order": obj.order, "alphabet_size": a, "kind": "conditional", "entries": entries}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path):
    """Load a joint or conditional model saved by save_model.

    Rows (or the joint total) deviating from 1 by less than 1e-9 are
    renormalized; larger deviations reject the file.
    """
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        order = int(doc["order"])
        a = int(doc["alphabet_size"])
        kind = doc["kind"]
        entries = doc["entries"]
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"{path}: missing field {exc}") from None
    if kind == "joint":
        probs = {}
        for e in entries:
            probs[int(e["key"])] = probs.get(int(e["key"]), 0.0) + float(e["prob"])
        total = sum(probs.values())
        if abs(total - 1.0) >= NORMALIZATION_TOL:
            raise ModelFormatError(f"{path}: joint sums to {total!r}; rejecting")
        probs = {k: v / total for k, v in probs.items()}
        if a**order <= DENSE_LIMIT:
            dense = np.zeros(a**order)
            for k, v in probs.items():
                dense[k] = v
            return JointTupleDistribution(order, a, dense)
        return JointTupleDistribution(order, a, probs)
    if kind == "conditional":
        rows = {}
        for e in entries:
            ctx, s = int(e["context_key"]), int(e["symbol"])
            rows.setdefault(ctx, {})[s] = float(e["prob"])
        table, reachable = {}, set()
        for ctx, row in rows.items():
            total = sum(row.values())
            if abs(total - 1.0) >= NORMALIZATION_TOL:
                raise ModelFormatError(
                    f"{path}: row for context {decode_tuple(ctx, order, a)} "
                    f"sums to {total!r}; rejecting"
                )
            for s, p in row.items():
                table[ctx * a + s] = p / total
            reachable.add(ctx)
        if a ** (order + 1) <= DENSE_LIMIT:
            dense = np.zeros(a ** (order + 1))
            for k, v in table.items():
                dense[k] = v
            mask = np.zeros(a**order, dtype=bool)
            mask[list(reachable)] = True
            return TabularConditional(order, a, dense, mask)
        return TabularConditional(order, a, table, reachable)
    raise ModelFormatError(f"{path}: unknown kind {kind!r}")
