"""entrev: forward/backward conditional entropy of discrete sequences.

Counts k-tuples exactly, evaluates conditional entropy in both directions,
verifies that the forward/backward gap equals the boundary term of the
sequence under a stationary model, and scores directional learnability with
matched forward/backward n-gram models.
"""

from .entropy import (
    DeltaHReport,
    EntropyReport,
    SymmetryReport,
    TheoremCheckReport,
    conditional_entropy,
    decompose_entropy,
    delta_h,
    symmetry_check,
    theorem_check,
)
from .errors import (
    ConvergenceError,
    EmptyInputError,
    EntrevError,
    KeyCapacityError,
    ModelFormatError,
    NonStationaryJointError,
    OrderMismatchError,
    ZeroContextError,
    ZeroProbabilityError,
)
from .kernels import BACKEND
from .models import (
    ConditionalModel,
    JointTupleDistribution,
    NGramModel,
    TabularConditional,
    bayes_reverse_conditional,
    conditional_from_joint,
    load_model,
    reverse_joint,
    save_model,
    train_ngram_model,
)
from .ngram import NGramTable, count_ngrams, end_marginal, reverse_table, start_marginal
from .sequence import Alphabet, Sequence, ingest_bytes, ingest_tokens
from .synth import (
    TransitionMatrix,
    expand_chain,
    generate_markov,
    joint_tuple_distribution,
    load_transition_matrix,
    make_random_chain,
    make_reversible_chain,
    save_transition_matrix,
    stationary_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BACKEND",
    "ConditionalModel",
    "ConvergenceError",
    "DeltaHReport",
    "EmptyInputError",
    "EntrevError",
    "EntropyReport",
    "JointTupleDistribution",
    "KeyCapacityError",
    "ModelFormatError",
    "NGramModel",
    "NGramTable",
    "NonStationaryJointError",
    "OrderMismatchError",
    "Sequence",
    "SymmetryReport",
    "TabularConditional",
    "TheoremCheckReport",
    "TransitionMatrix",
    "ZeroContextError",
    "ZeroProbabilityError",
    "bayes_reverse_conditional",
    "conditional_entropy",
    "conditional_from_joint",
    "count_ngrams",
    "decompose_entropy",
    "delta_h",
    "end_marginal",
    "expand_chain",
    "generate_markov",
    "ingest_bytes",
    "ingest_tokens",
    "joint_tuple_distribution",
    "load_model",
    "load_transition_matrix",
    "make_random_chain",
    "make_reversible_chain",
    "reverse_joint",
    "reverse_table",
    "save_model",
    "save_transition_matrix",
    "start_marginal",
    "stationary_distribution",
    "symmetry_check",
    "theorem_check",
    "train_ngram_model",
]
