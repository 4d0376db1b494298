"""Ground-truth Markov sources for exact verification runs.

Everything here is deterministic given a seed. The random stream is pinned
for cross-run and cross-backend reproducibility: a PCG64 bit generator
seeded through SeedSequence(seed), converted to doubles by taking the top 53
bits of each 64-bit draw, consumed via inverse-CDF lookup on cumulative
transition rows.
"""

import json

import numpy as np

from .errors import ConvergenceError, ModelFormatError, NonStationaryJointError
from .kernels import markov_generate
from .models import DENSE_LIMIT, JointTupleDistribution
from .sequence import Alphabet, Sequence

ROW_SUM_TOL = 1e-12
POWER_ITERATION_TOL = 1e-14
POWER_ITERATION_MAX = 10**6


class TransitionMatrix:
    """A row-stochastic matrix over states 0..size-1."""

    __slots__ = ("rows", "size")

    def __init__(self, rows):
        rows = np.ascontiguousarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
            raise ValueError("transition matrix must be square")
        if rows.size == 0:
            raise ValueError("transition matrix must be nonempty")
        if rows.min() < 0.0:
            raise ValueError("transition probabilities must be nonnegative")
        bad = np.abs(rows.sum(axis=1) - 1.0) > ROW_SUM_TOL
        if bad.any():
            i = int(np.argmax(bad))
            raise ValueError(f"row {i} sums to {rows[i].sum()!r}, not 1")
        rows.flags.writeable = False
        self.rows = rows
        self.size = rows.shape[0]

    def __repr__(self):
        return f"TransitionMatrix(size={self.size})"


def _is_primitive(rows):
    """Irreducible and aperiodic, via Wielandt's bound on boolean powers."""
    a = rows.shape[0]
    reach = rows > 0.0
    needed = (a - 1) ** 2 + 1
    power = 1
    while power < needed and not reach.all():
        reach = reach @ reach
        power *= 2
    return bool(reach.all())


def stationary_distribution(chain):
    """The unique probability vector with pi @ P == pi, by power iteration.

    Requires an irreducible aperiodic chain; reducible or periodic inputs
    raise ConvergenceError, since their limit either is not unique or does
    not exist.
    """
    if not _is_primitive(chain.rows):
        raise ConvergenceError(
            "power iteration cannot converge to a unique stationary distribution; "
            "the chain is reducible or periodic"
        )
    a = chain.size
    pi = np.full(a, 1.0 / a)
    for _ in range(POWER_ITERATION_MAX):
        nxt = pi @ chain.rows
        nxt /= nxt.sum()
        if float(np.max(np.abs(nxt - pi))) < POWER_ITERATION_TOL:
            pi = nxt
            break
        pi = nxt
    else:
        raise ConvergenceError(
            f"power iteration did not converge within {POWER_ITERATION_MAX} steps"
        )
    residual = float(np.max(np.abs(pi @ chain.rows - pi)))
    if residual > 1e-12:
        raise ConvergenceError(f"stationary residual {residual} exceeds 1e-12")
    return pi


def _uniform_doubles(seed, count):
    """Pinned uniform doubles in [0, 1): top 53 bits of raw PCG64 output."""
    raw = np.random.PCG64(seed).random_raw(count)
    return (raw >> np.uint64(11)) * (2.0**-53)


def generate_markov(chain, pi_init, length, seed):
    """Sample a state path: s_0 ~ pi_init, s_{t+1} ~ P[s_t].

    Deterministic given (chain, pi_init, length, seed); see the module
    docstring for the exact random stream.
    """
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    pi_init = np.asarray(pi_init, dtype=np.float64)
    if pi_init.shape != (chain.size,) or pi_init.min() < 0.0:
        raise ValueError("pi_init must be a distribution over the chain's states")
    if abs(pi_init.sum() - 1.0) > 1e-9:
        raise ValueError(f"pi_init sums to {pi_init.sum()!r}, not 1")
    uniforms = _uniform_doubles(seed, length)
    ids = markov_generate(np.cumsum(chain.rows, axis=1), np.cumsum(pi_init), uniforms)
    return Sequence(ids, Alphabet(tuple(range(chain.size))))


def joint_tuple_distribution(chain, pi, m):
    """Exact m-tuple distribution of the stationary chain.

    probs[(s_0..s_{m-1})] = pi(s_0) * prod_i P[s_i, s_{i+1}]. Requires pi to
    be stationary for P; the result's leading and trailing (m-1)-marginals
    then agree to within 1e-12, which is verified before returning.
    """
    a = chain.size
    pi = np.asarray(pi, dtype=np.float64)
    if pi.shape != (a,):
        raise ValueError("pi must have one entry per state")
    residual = float(np.max(np.abs(pi @ chain.rows - pi)))
    if residual > 1e-10:
        raise NonStationaryJointError(
            f"pi is not stationary for this chain (residual {residual:.3e})"
        )
    if m < 1:
        raise ValueError(f"tuple order must be >= 1, got {m}")
    if a**m > DENSE_LIMIT:
        raise ValueError(f"dense joint of order {m} over {a} symbols exceeds {DENSE_LIMIT} cells")
    probs = pi.copy()
    for _ in range(m - 1):
        last = np.arange(probs.size) % a
        probs = (probs[:, None] * chain.rows[last]).ravel()
    joint = JointTupleDistribution(m, a, probs, stationary=None)
    if not joint.stationary:
        raise NonStationaryJointError("constructed joint failed the marginal agreement check")
    return joint


def make_reversible_chain(size, seed):
    """A random chain satisfying detailed balance.

    Rows normalize a random symmetric positive weight matrix W, so the flux
    pi_i P_ij = W_ij / sum(W) is symmetric by construction.
    """
    if size < 2:
        raise ValueError(f"need at least 2 states, got {size}")
    u = _uniform_doubles(seed, size * size).reshape(size, size)
    w = 0.1 + u
    w = 0.5 * (w + w.T)
    return TransitionMatrix(w / w.sum(axis=1, keepdims=True))


def make_random_chain(size, seed, bias=0.0):
    """A random irreducible aperiodic chain with strictly positive entries.

    `bias` > 0 tilts mass toward the cyclic successor state, producing
    chains that are far from reversible.
    """
    if size < 2:
        raise ValueError(f"need at least 2 states, got {size}")
    u = _uniform_doubles(seed, size * size).reshape(size, size)
    w = 0.05 + u
    if bias:
        for i in range(size):
            w[i, (i + 1) % size] += bias
    return TransitionMatrix(w / w.sum(axis=1, keepdims=True))


def expand_chain(chain, r):
    """Lift an order-1 chain to tuple states of its last r symbols.

    The expanded chain has size**r states keyed by the base-A tuple
    encoding; state u moves to ((u mod A^(r-1)) * A + x) with probability
    P[u mod A, x]. Its paths are the overlapping r-windows of base-chain
    paths, which is how higher-order sources are exercised without a
    dedicated generator.
    """
    if r < 1:
        raise ValueError(f"expansion order must be >= 1, got {r}")
    a = chain.size
    if a**r > 4096:
        raise ValueError(f"expanded state space {a}**{r} is unreasonably large")
    n_states = a**r
    rows = np.zeros((n_states, n_states))
    tail = (np.arange(n_states) % a ** (r - 1)) * a
    last = np.arange(n_states) % a
    for x in range(a):
        rows[np.arange(n_states), tail + x] = chain.rows[last, x]
    return TransitionMatrix(rows)


def save_transition_matrix(chain, path):
    doc = {"alphabet_size": chain.size, "rows": chain.rows.tolist()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_transition_matrix(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        size = int(doc["alphabet_size"])
        rows = doc["rows"]
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"{path}: missing field {exc}") from None
    rows = np.asarray(rows, dtype=np.float64)
    if rows.shape != (size, size):
        raise ModelFormatError(
            f"{path}: rows have shape {rows.shape}, expected ({size}, {size})"
        )
    try:
        return TransitionMatrix(rows)
    except ValueError as exc:
        raise ModelFormatError(f"{path}: {exc}") from None
