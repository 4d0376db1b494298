"""Independent brute-force references used only by the test suite.

Everything here avoids the package's counting and evaluation paths: plain
Python loops, tuple slices and math.fsum. Keeping these naive is the point;
they are the other side of every dual-route check.
"""

import math
from collections import Counter


def window_tuples(ids, k):
    ids = [int(x) for x in ids]
    return [tuple(ids[i : i + k]) for i in range(len(ids) - k + 1)]


def brute_counts(ids, k):
    """Overlapping k-tuple occurrence counts via Counter."""
    return Counter(window_tuples(ids, k))


def naive_conditional_entropy(seq, model):
    """Window-by-window -log model probability, no count grouping."""
    n = model.order
    ids = [int(x) for x in seq.ids]
    terms = []
    for i in range(len(ids) - n):
        context = tuple(ids[i : i + n])
        terms.append(-math.log(model.prob(context, ids[i + n])))
    return math.fsum(terms)


def naive_decomposition(seq, joint):
    """Window-by-window split of the entropy against a joint."""
    m = joint.order
    a = joint.alphabet_size
    marg = joint.start_marginal()
    ids = [int(x) for x in seq.ids]
    h1_terms, h2_terms = [], []
    for i in range(len(ids) - m + 1):
        key = 0
        for s in ids[i : i + m]:
            key = key * a + s
        h1_terms.append(-math.log(joint.prob(key)))
        h2_terms.append(math.log(marg.prob(key // a)))
    return math.fsum(h1_terms), math.fsum(h2_terms)
