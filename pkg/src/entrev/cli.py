"""Command-line interface.

Subcommands: count, verify, delta-h, symmetry, gen. Exit codes are stable
for CI use: 0 success, 1 verification failure, 2 usage or input error.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .coding import decode_tuple
from .entropy import DELTA_H_THRESHOLD, delta_h, symmetry_check, theorem_check
from .errors import EntrevError
from .models import (
    JointTupleDistribution,
    bayes_reverse_conditional,
    conditional_from_joint,
    load_model,
    train_ngram_model,
)
from .ngram import count_ngrams
from .sequence import Alphabet, ingest_bytes, ingest_tokens
from .synth import (
    generate_markov,
    joint_tuple_distribution,
    load_transition_matrix,
    stationary_distribution,
)

VERIFY_RESIDUAL_TOL = 1e-8


def _add_common(parser):
    parser.add_argument("--output", help="write the report to this file instead of stdout")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--bits", action="store_true", help="report entropies in bits, not nats")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="internal chunking for counting (results are identical)")
    parser.add_argument("--deterministic", action="store_true",
                        help="force sequential counting and reduction")


def _add_ingest(parser):
    parser.add_argument("--input", required=True, help="raw input file")
    parser.add_argument("--full-bytes", action="store_true",
                        help="use the full 256-byte alphabet instead of observed bytes")
    parser.add_argument("--tokens", help="declared token list (one token per line)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entrev",
        description="Forward/backward conditional entropy and reversal-gap analysis "
        "of discrete sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count overlapping k-tuples of a file")
    _add_ingest(p)
    _add_common(p)
    p.add_argument("--order", type=int, required=True, help="tuple length k")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="check the forward/backward entropy gap identity")
    _add_ingest(p)
    _add_common(p)
    p.add_argument("--order", type=int, help="context order n (required unless --joint)")
    p.add_argument("--joint", help="joint model JSON file")
    p.add_argument("--transition", help="transition matrix JSON file (exact chain model)")
    p.add_argument("--report-only", action="store_true",
                   help="never fail; also accepts non-stationary/empirical models")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("delta-h", help="directional learnability of a dataset")
    _add_common(p)
    p.add_argument("--input", help="raw input file")
    p.add_argument("--full-bytes", action="store_true")
    p.add_argument("--tokens", help="declared token list (one token per line)")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--k", type=float, default=1.0, help="add-k smoothing for both directions")
    p.add_argument("--k-forward", type=float, help="override smoothing for the forward model")
    p.add_argument("--k-backward", type=float, help="override smoothing for the backward model")
    p.add_argument("--threshold", type=float, default=DELTA_H_THRESHOLD,
                   help="verdict threshold in nats/symbol")
    p.add_argument("--transition", help="generate inputs from this chain instead of --input")
    p.add_argument("--length", type=int, help="generated sequence length (with --transition)")
    p.add_argument("--seeds", help="comma-separated seeds (with --transition)")
    p.set_defaults(func=cmd_delta_h)

    p = sub.add_parser("symmetry", help="per-tuple forward/backward model agreement")
    _add_common(p)
    p.add_argument("--input", help="train matched models on this file")
    p.add_argument("--full-bytes", action="store_true")
    p.add_argument("--tokens", help="declared token list (one token per line)")
    p.add_argument("--order", type=int, help="context order n")
    p.add_argument("--k", type=float, default=0.0, help="add-k smoothing for trained models")
    p.add_argument("--model", help="forward conditional model JSON file")
    p.add_argument("--reverse-model", help="backward conditional model JSON file")
    p.add_argument("--joint", help="joint model JSON file supplying tuple probabilities")
    p.add_argument("--transition", help="exact-chain mode: derive everything from this chain")
    p.add_argument("--top", type=int, default=20, help="rows to keep, by descending gap")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("gen", help="sample a Markov chain to a raw byte file")
    p.add_argument("--transition", required=True, help="transition matrix JSON file")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--init", default="stationary",
                   help="initial distribution: stationary | uniform | STATE_INDEX")
    p.add_argument("--out", "--output", dest="out", required=True, help="output file")
    p.set_defaults(func=cmd_gen)

    return parser


def _units(args):
    return "bits" if args.bits else "nats"


def _chunks(args):
    return 1 if args.deterministic else max(1, args.threads)


def _read_sequence(args, alphabet=None):
    raw = Path(args.input).read_bytes()
    if args.tokens:
        return ingest_tokens(raw.decode("utf-8"), Alphabet.from_token_file(args.tokens))
    return ingest_bytes(raw, full_byte_alphabet=args.full_bytes, alphabet=alphabet)


def _emit(args, payload):
    """Write a report to --output or stdout. JSON is key-sorted, so repeated
    runs on identical inputs produce byte-identical files."""
    if isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_count(args):
    seq = _read_sequence(args)
    table = count_ngrams(seq, args.order, chunks=_chunks(args))
    entries = [
        {
            "key": key,
            "tuple": [seq.alphabet.symbols[s] for s in decode_tuple(key, table.order, table.alphabet_size)],
            "count": count,
        }
        for key, count in table.items()
    ]
    _emit(args, {"order": table.order, "window_total": table.window_total, "counts": entries})
    return 0


def _verify_joint(args, seq_loader):
    """Resolve (sequence, joint) for the verify subcommand."""
    if args.transition:
        chain = load_transition_matrix(args.transition)
        if args.order is None:
            raise EntrevError("--order is required with --transition")
        seq = seq_loader(Alphabet.byte_range(chain.size))
        pi = stationary_distribution(chain)
        return seq, joint_tuple_distribution(chain, pi, args.order + 1)
    if args.joint:
        joint = load_model(args.joint)
        if not isinstance(joint, JointTupleDistribution):
            raise EntrevError(f"{args.joint} holds a conditional model, not a joint")
        if args.order is not None and args.order != joint.order - 1:
            raise EntrevError(
                f"--order {args.order} conflicts with joint order {joint.order}"
            )
        seq = seq_loader(Alphabet.byte_range(joint.alphabet_size))
        return seq, joint
    # Empirical plug-in: the sequence's own tuple frequencies stand in for
    # the model. Only meaningful in report-only mode.
    if not args.report_only:
        raise EntrevError(
            "exact verification needs --joint or --transition; "
            "use --report-only for the empirical plug-in mode"
        )
    if args.order is None:
        raise EntrevError("--order is required in empirical mode")
    seq = seq_loader(None)
    joint = JointTupleDistribution.from_counts(count_ngrams(seq, args.order + 1))
    return seq, joint


def cmd_verify(args):
    seq, joint = _verify_joint(args, lambda alphabet: _read_sequence(args, alphabet))
    report = theorem_check(seq, joint, report_only=args.report_only)
    units = _units(args)
    doc = report.to_dict(units)
    _emit(args, doc)
    scale = 1.0 if units == "nats" else 1.0 / math.log(2.0)
    print(
        f"h_forward={report.h_forward * scale:.6f} {units}, "
        f"h_backward={report.h_backward * scale:.6f} {units}, "
        f"boundary={report.boundary_term * scale:.6e}, "
        f"residual={report.residual * scale:.3e}, "
        f"per_symbol_gap={doc['per_symbol_gap']:.3e}",
        file=sys.stderr,
    )
    if args.report_only:
        return 0
    if abs(report.residual) <= VERIFY_RESIDUAL_TOL:
        return 0
    print(
        f"verification FAILED: |residual| = {abs(report.residual):.3e} nats "
        f"> {VERIFY_RESIDUAL_TOL:.0e}",
        file=sys.stderr,
    )
    return 1


def cmd_delta_h(args):
    units = _units(args)
    if args.transition:
        if not args.length or not args.seeds:
            raise EntrevError("--transition mode needs --length and --seeds")
        chain = load_transition_matrix(args.transition)
        pi = stationary_distribution(chain)
        seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
        if not seeds:
            raise EntrevError("--seeds must list at least one integer seed")
        per_seed = []
        for seed in seeds:
            seq = generate_markov(chain, pi, args.length, seed)
            report = delta_h(
                seq, args.order, args.k,
                k_forward=args.k_forward, k_backward=args.k_backward,
                threshold=args.threshold,
            )
            per_seed.append({"seed": seed, **report.to_dict(units)})
        values = [r["delta_h_per_symbol"] for r in per_seed]
        doc = {
            "per_seed": per_seed,
            "mean_delta_h": float(np.mean(values)),
            "std_delta_h": float(np.std(values, ddof=1)) if len(values) > 1 else 0.0,
            "seeds": seeds,
            "units": units,
        }
        _emit(args, doc)
        return 0
    if not args.input:
        raise EntrevError("delta-h needs --input or --transition")
    seq = _read_sequence(args)
    report = delta_h(
        seq, args.order, args.k,
        k_forward=args.k_forward, k_backward=args.k_backward,
        threshold=args.threshold,
    )
    _emit(args, report.to_dict(units))
    return 0


def cmd_symmetry(args):
    if args.transition:
        if args.order is None:
            raise EntrevError("--order is required with --transition")
        chain = load_transition_matrix(args.transition)
        pi = stationary_distribution(chain)
        joint = joint_tuple_distribution(chain, pi, args.order + 1)
        fwd = conditional_from_joint(joint)
        bwd = bayes_reverse_conditional(fwd, joint.start_marginal())
    elif args.model or args.reverse_model or args.joint:
        if not (args.model and args.reverse_model and args.joint):
            raise EntrevError("file mode needs --model, --reverse-model and --joint together")
        fwd = load_model(args.model)
        bwd = load_model(args.reverse_model)
        joint = load_model(args.joint)
        if isinstance(fwd, JointTupleDistribution) or isinstance(bwd, JointTupleDistribution):
            raise EntrevError("--model and --reverse-model must hold conditional models")
        if not isinstance(joint, JointTupleDistribution):
            raise EntrevError(f"{args.joint} does not hold a joint distribution")
    else:
        if not args.input or args.order is None:
            raise EntrevError("trained mode needs --input and --order")
        seq = _read_sequence(args)
        n = args.order
        fwd = train_ngram_model(seq, n, args.k, direction="forward")
        bwd = train_ngram_model(seq.reverse(), n, args.k, direction="backward")
        joint = JointTupleDistribution.from_counts(count_ngrams(seq, n + 1))
        # Trained-pair diagnostics estimate the unconditional context
        # probabilities from full n-gram frequencies, not the joint's
        # window-start marginal (the latter cancels against MLE training).
        marginals = None
        if n >= 1:
            marginals = (
                JointTupleDistribution.from_counts(count_ngrams(seq, n)),
                JointTupleDistribution.from_counts(count_ngrams(seq.reverse(), n)),
            )
        report = symmetry_check(fwd, bwd, joint, top_k=args.top, marginals=marginals)
        _write_symmetry(args, report)
        return 0
    report = symmetry_check(fwd, bwd, joint, top_k=args.top)
    _write_symmetry(args, report)
    return 0


def _write_symmetry(args, report):
    if args.format == "csv":
        _emit(args, report.to_csv())
    else:
        _emit(args, report.to_dict(_units(args)))
    print(
        f"tuples={report.tuple_count}, max_gap={report.max_gap:.3e}, "
        f"mean_gap={report.mean_gap:.3e}",
        file=sys.stderr,
    )


def cmd_gen(args):
    chain = load_transition_matrix(args.transition)
    if chain.size > 256:
        raise EntrevError("cannot write chains with more than 256 states as raw bytes")
    if args.init == "stationary":
        pi = stationary_distribution(chain)
    elif args.init == "uniform":
        pi = np.full(chain.size, 1.0 / chain.size)
    else:
        try:
            state = int(args.init)
        except ValueError:
            raise EntrevError(f"--init must be stationary, uniform or a state index, "
                              f"got {args.init!r}") from None
        if not 0 <= state < chain.size:
            raise EntrevError(f"--init state {state} out of range")
        pi = np.zeros(chain.size)
        pi[state] = 1.0
    seq = generate_markov(chain, pi, args.length, args.seed)
    Path(args.out).write_bytes(bytes(seq.ids.astype(np.uint8)))
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EntrevError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
