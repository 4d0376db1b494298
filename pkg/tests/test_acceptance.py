"""Acceptance suite: one test per criterion, in order.

Run `pytest -v tests/test_acceptance.py` for one pass/fail line per
criterion; each test also prints a summary line (visible with -s or -rA).
"""

import json
import math
import time

import numpy as np
import pytest

from entrev import (
    JointTupleDistribution,
    TabularConditional,
    bayes_reverse_conditional,
    conditional_entropy,
    conditional_from_joint,
    count_ngrams,
    delta_h,
    end_marginal,
    generate_markov,
    joint_tuple_distribution,
    make_random_chain,
    make_reversible_chain,
    reverse_joint,
    start_marginal,
    stationary_distribution,
    theorem_check,
    train_ngram_model,
)
from entrev.cli import main as cli_main
from entrev.coding import decode_tuple

from .conftest import make_seq
from .oracles import naive_conditional_entropy

RESIDUAL_TOL = 1e-8
RELABEL_RTOL = 1e-10
MODEL_ATOL = 1e-12
ORACLE_RTOL = 1e-9
RUNTIME_LIMIT_S = 5.0


@pytest.fixture(scope="module")
def theorem_grid():
    """Criteria 1, 2 and 5 share this grid of 120 exact-chain runs."""
    runs = []
    for i in range(20):
        size = 2 + i % 5  # alphabets 2..6
        chain = make_random_chain(size, seed=1000 + i, bias=0.6 if i % 3 == 0 else 0.0)
        pi = stationary_distribution(chain)
        for n in (1, 2, 3):
            joint = joint_tuple_distribution(chain, pi, n + 1)
            for length in (10**3, 10**5):
                seq = generate_markov(chain, pi, length, seed=97 * i + 7 * n + length)
                start = time.perf_counter()
                report = theorem_check(seq, joint)
                elapsed = time.perf_counter() - start
                runs.append((size, n, length, report, elapsed))
    return runs


def test_criterion_1_theorem_identity(theorem_grid):
    worst = 0.0
    slowest = 0.0
    for size, n, length, report, elapsed in theorem_grid:
        assert abs(report.residual) <= RESIDUAL_TOL, (size, n, length, report.residual)
        worst = max(worst, abs(report.residual))
        if length == 10**5:
            assert elapsed < RUNTIME_LIMIT_S, (size, n, elapsed)
            slowest = max(slowest, elapsed)
    print(
        f"\n[criterion 1] PASS: {len(theorem_grid)} runs, max |residual| = "
        f"{worst:.2e} <= {RESIDUAL_TOL:.0e}, slowest N=1e5 run {slowest:.3f}s"
    )


def test_criterion_2_relabeling_identity(theorem_grid):
    worst = 0.0
    for size, n, length, report, _ in theorem_grid:
        rel = abs(report.h1 - report.h1_rev) / max(abs(report.h1), 1.0)
        assert rel <= RELABEL_RTOL, (size, n, length, rel)
        worst = max(worst, rel)
    print(
        f"\n[criterion 2] PASS: h1 forward/backward relative gap <= "
        f"{worst:.2e} over {len(theorem_grid)} runs"
    )


def test_criterion_3_boundary_counting_identity():
    rng = np.random.default_rng(314159)
    cases = 0
    while cases < 1000:
        size = int(rng.integers(2, 9))
        k = int(rng.integers(1, 5))
        length = int(rng.integers(2, 201))
        if length < k + 1:
            continue
        seq = make_seq(rng.integers(0, size, size=length), size)
        table = count_ngrams(seq, k + 1)
        start, end = start_marginal(table), end_marginal(table)
        first = seq.tuple_at(0, k)
        last = seq.tuple_at(length - k, k)
        for key in set(start.as_dict()) | set(end.as_dict()):
            t = decode_tuple(key, k, size)
            expected = (1 if t == first else 0) - (1 if t == last else 0)
            assert start.get(key) - end.get(key) == expected, (t, first, last)
        cases += 1
    print(f"\n[criterion 3] PASS: exact +-1 boundary pattern on {cases} random sequences")


def test_criterion_4_per_symbol_gap_decay(two_state_chain):
    pi = np.array([2 / 3, 1 / 3])
    joint = joint_tuple_distribution(two_state_chain, pi, 2)
    gaps = []
    for length in (10**3, 10**4, 10**5):
        seq = generate_markov(two_state_chain, pi, length, seed=5)
        report = theorem_check(seq, joint)
        gaps.append(abs(report.h_forward - report.h_backward) / length)
    assert gaps[0] > gaps[1] > gaps[2] > 0.0, gaps
    assert gaps[2] < 1e-4
    print(
        f"\n[criterion 4] PASS: per-symbol gap {gaps[0]:.2e} > {gaps[1]:.2e} > "
        f"{gaps[2]:.2e} (N=1e3, 1e4, 1e5), final < 1e-4"
    )


def test_criterion_5_gap_bound(theorem_grid):
    for size, n, length, report, _ in theorem_grid:
        gap = abs(report.h_forward - report.h_backward)
        # the realized boundary can sit exactly at the bound; leave room for
        # the (already asserted) <= 1e-8 residual on top of it
        assert gap <= report.c_bound + 1e-9, (size, n, length, gap, report.c_bound)
    print(
        f"\n[criterion 5] PASS: |H_fwd - H_bwd| <= log(max/min n-marginal) in "
        f"{len(theorem_grid)} runs"
    )


def test_criterion_6_bayes_reversal():
    # reversible chains: the reversed conditionals equal the forward ones
    for size in (2, 3, 4, 5, 6):
        chain = make_reversible_chain(size, seed=500 + size)
        pi = stationary_distribution(chain)
        joint = joint_tuple_distribution(chain, pi, 2)
        fwd = conditional_from_joint(joint)
        rev = bayes_reverse_conditional(fwd, joint.start_marginal())
        for ctx in range(size):
            assert np.allclose(rev.row(ctx), fwd.row(ctx), atol=MODEL_ATOL)
    # double reversal and route agreement on random stationary joints
    for trial in range(10):
        size = 2 + trial % 4
        n = 1 + trial % 3
        chain = make_random_chain(size, seed=900 + trial, bias=0.4)
        joint = joint_tuple_distribution(chain, stationary_distribution(chain), n + 1)
        fwd = conditional_from_joint(joint)
        marg = joint.start_marginal()
        rev = bayes_reverse_conditional(fwd, marg)
        back = bayes_reverse_conditional(rev, reverse_joint(joint).start_marginal())
        via_joint = conditional_from_joint(reverse_joint(joint))
        for ctx in range(size**n):
            assert np.allclose(back.row(ctx), fwd.row(ctx), atol=MODEL_ATOL)
            assert np.allclose(rev.row(ctx), via_joint.row(ctx), atol=MODEL_ATOL)
    print(
        "\n[criterion 6] PASS: reversible-chain self-reversal, double reversal "
        "and both reversal routes agree within 1e-12"
    )


def test_criterion_7_delta_h_null_and_mismatch():
    chain = make_reversible_chain(6, seed=77)
    pi = stationary_distribution(chain)
    deltas = []
    for seed in range(10):
        seq = generate_markov(chain, pi, 10**5, seed=seed)
        deltas.append(delta_h(seq, 3, 1.0).delta_h_per_symbol)
    deltas = np.array(deltas)
    spread = float(np.std(deltas, ddof=1))
    mean_abs = float(np.mean(np.abs(deltas)))
    assert mean_abs <= 3.0 * spread, (mean_abs, spread)

    seq = generate_markov(chain, pi, 10**5, seed=0)
    easier_fwd = delta_h(seq, 3, 1.0, k_forward=0.1, k_backward=10.0)
    assert easier_fwd.delta_h_per_symbol < -easier_fwd.threshold
    assert easier_fwd.direction_verdict == "forward-easier"
    easier_bwd = delta_h(seq, 3, 1.0, k_forward=10.0, k_backward=0.1)
    assert easier_bwd.delta_h_per_symbol > easier_bwd.threshold
    assert easier_bwd.direction_verdict == "backward-easier"
    print(
        f"\n[criterion 7] PASS: null mean |dH| = {mean_abs:.2e} <= 3 * std = "
        f"{3 * spread:.2e}; mismatched smoothing gives dH = "
        f"{easier_fwd.delta_h_per_symbol:+.2e} with the matching verdict"
    )


def test_criterion_8_count_weighted_equals_naive():
    rng = np.random.default_rng(2718)
    worst = 0.0
    for trial in range(100):
        size = int(rng.integers(2, 7))
        n = int(rng.integers(0, 3))
        length = int(rng.integers(n + 2, 10**4 + 1))
        seq = make_seq(rng.integers(0, size, size=length), size)
        if trial % 2 == 0:
            rows = rng.dirichlet(np.ones(size), size=size**n)
            model = TabularConditional(
                n, size, rows.reshape(-1), np.ones(size**n, dtype=bool)
            )
        else:
            model = train_ngram_model(seq, n, float(rng.uniform(0.05, 2.0)))
        total = conditional_entropy(seq, model).total_nats
        oracle = naive_conditional_entropy(seq, model)
        rel = abs(total - oracle) / max(abs(oracle), 1.0)
        assert rel <= ORACLE_RTOL, (trial, size, n, length, rel)
        worst = max(worst, rel)
    print(
        f"\n[criterion 8] PASS: count-weighted vs per-window oracle, "
        f"max relative gap {worst:.2e} over 100 pairs"
    )


def _synthesize_text(n_bytes, seed=1):
    """Deterministic pseudo-text: Zipf-weighted word soup with punctuation."""
    rng = np.random.default_rng(seed)
    vocab = [
        "the", "of", "and", "to", "in", "a", "is", "that", "for", "it",
        "was", "on", "are", "with", "as", "his", "they", "be", "at", "one",
        "have", "this", "from", "or", "had", "by", "word", "but", "what",
        "some", "we", "can", "out", "other", "were", "all", "there", "when",
        "up", "use", "your", "how", "said", "an", "each", "she", "which",
        "do", "their", "time", "if", "will", "way", "about", "many", "then",
        "them", "write", "would", "like", "so", "these", "her", "long",
        "make", "thing", "see", "him", "two", "has", "look", "more", "day",
        "could", "go", "come", "did", "number", "sound", "no", "most",
        "people", "my", "over", "know", "water", "than", "call", "first",
        "who", "may", "down", "side", "been", "now", "find",
    ]
    weights = 1.0 / np.arange(1, len(vocab) + 1)
    weights /= weights.sum()
    parts, size = [], 0
    while size < n_bytes:
        k = int(rng.integers(6, 14))
        words = rng.choice(len(vocab), size=k, p=weights)
        sentence = " ".join(vocab[w] for w in words) + ".\n"
        parts.append(sentence)
        size += len(sentence)
    return "".join(parts).encode("ascii")


def test_criterion_9_empirical_gap_shrinks_with_prefix_length(tmp_path):
    text = _synthesize_text(1_050_000)
    assert len(text) >= 10**6
    gaps = []
    for length in (10**4, 10**5, 10**6):
        prefix = tmp_path / f"prefix_{length}"
        prefix.write_bytes(text[:length])
        out = tmp_path / f"report_{length}.json"
        code = cli_main(
            [
                "verify", "--input", str(prefix), "--order", "2",
                "--report-only", "--output", str(out),
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        gaps.append(doc["per_symbol_gap"])
    assert gaps[0] > gaps[1] > gaps[2], gaps
    print(
        f"\n[criterion 9] PASS: report-only per-symbol gap {gaps[0]:.2e} > "
        f"{gaps[1]:.2e} > {gaps[2]:.2e} at prefixes 1e4, 1e5, 1e6"
    )
