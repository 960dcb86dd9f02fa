#!/usr/bin/env python3
"""
Command-line interface

Exit codes: 0 success / experiment passed, 1 experiment failed,
2 usage, validation or I/O error.
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .config import DEFAULT_SEED, DEFAULT_TOLERANCE
from .errors import InvariantInfoError, ValidationError
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment
from .infomeasure import (
    bz_from_povm,
    bz_measure,
    info_report,
    shannon_entropy,
    square_sum,
    von_neumann_entropy,
)
from .measurement import (
    eigenbasis_measurement,
    eq1_povm,
    measurement_probabilities,
    mub_set,
    povm_probabilities,
    sequential_measure,
)
from .probability import ProbabilityDistribution
from .report_generator import FORMATS, Report, save_report
from .state import DensityMatrix, check_density, purity
from .state_parser import DensityMatrixParser, check_dim, mubs_to_document, povm_to_document

logger = logging.getLogger(__name__)

CSV_COLUMNS_HELP = """\
CSV column order:
  experiments  experiment, trial, case, inputs_digest, max_residual, band, passed,
               then the measured values and residual_* columns of each record
  report       label, shannon_bits, bz_value, i_total, shannon_sum,
               von_neumann_bits, purity, povm_bz
  check        dim, hermiticity, trace_error, min_eigenvalue, valid
  mubs         basis, outcome, re_0, im_0, re_1, im_1, ...
  povm-eq1     label, trace, min_eigenvalue[, probability]
  sequential   first, second, probability
Floats are written with 17 significant digits and '.' as decimal separator.
"""

CommandResult = Tuple[object, int]


def _add_common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--input', metavar='PATH', help="density-matrix JSON file {dim, re, im}")
    parser.add_argument('--dim', type=int, metavar='N', help="Hilbert-space dimension")
    parser.add_argument('--trials', type=int, metavar='N', help="number of trials (experiments)")
    parser.add_argument('--seed', type=int, metavar='N', help=f"64-bit seed (default {DEFAULT_SEED})")
    parser.add_argument('--tolerance', type=float, default=DEFAULT_TOLERANCE, metavar='X',
                        help=f"pass/fail tolerance (default {DEFAULT_TOLERANCE})")
    parser.add_argument('--format', choices=FORMATS, default='json', help="output format")
    parser.add_argument('--out', metavar='PATH', help="write output here instead of standard output")
    parser.add_argument('--normalized', action='store_true',
                        help="scale the information measure by n/(n-1) so its maximum is 1")
    parser.add_argument('--probs', metavar='P1,P2,...',
                        help="comma-separated probability distribution (entropy, bzinfo)")
    parser.add_argument('--first', type=int, default=0, metavar='K', help="index of the first MUB (sequential)")
    parser.add_argument('--second', type=int, default=1, metavar='K', help="index of the second MUB (sequential)")
    parser.add_argument('--workers', type=int, default=1, metavar='N', help="threads for experiment trials")
    parser.add_argument('-v', '--verbose', action='store_true', help="debug logging")
    parser.add_argument('-q', '--quiet', action='store_true', help="warnings and errors only")


def _configure_logging(args: argparse.Namespace):
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s',
                        stream=sys.stderr, force=True)


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        logger.warning(f"🎲 No --seed given, using default seed {DEFAULT_SEED}")
        return DEFAULT_SEED
    logger.info(f"🎲 Using seed {args.seed}")
    return args.seed


def _load_state(args: argparse.Namespace) -> DensityMatrix:
    if not args.input:
        raise ValidationError(f"{args.command}: --input is required")
    return check_dim(DensityMatrixParser().parse_file(args.input), args.dim)


def _parse_probs(text: str) -> ProbabilityDistribution:
    try:
        values = [float(x) for x in text.split(',') if x.strip()]
    except ValueError as e:
        raise ValidationError(f"--probs: {e}") from e
    return ProbabilityDistribution.from_values(values)


def _optional_seed(args: argparse.Namespace) -> Optional[int]:
    # Seeded mode of the MUB construction is opt-in; without --seed the canonical set is used
    if args.seed is not None:
        logger.info(f"🎲 Using seed {args.seed} (rotated MUB set)")
    return args.seed


def cmd_check(args: argparse.Namespace) -> CommandResult:
    if not args.input:
        raise ValidationError("check: --input is required")
    parser = DensityMatrixParser()
    matrix = parser.parse_matrix(parser.read_document(args.input))
    result = check_density(matrix)
    if args.dim is not None and result.dim != args.dim:
        raise ValidationError(f"dimension mismatch: file has dim {result.dim}, --dim is {args.dim}")

    document = {
        'dim': result.dim,
        'hermiticity': result.hermiticity,
        'trace_error': result.trace_error,
        'min_eigenvalue': result.min_eigenvalue,
        'valid': result.valid,
        'violations': list(result.violations),
    }
    row = {k: document[k] for k in ('dim', 'hermiticity', 'trace_error', 'min_eigenvalue', 'valid')}
    if result.valid:
        logger.info(f"✅ {args.input} is a valid density matrix")
        return Report(document, [row]), 0
    for violation in result.violations:
        logger.error(f"❌ {violation}")
    return Report(document, [row]), 2


def cmd_entropy(args: argparse.Namespace) -> CommandResult:
    if args.probs:
        p = _parse_probs(args.probs)
        return {'n': p.n, 'probabilities': p.to_list(), 'shannon_bits': shannon_entropy(p)}, 0

    rho = _load_state(args)
    eigen = measurement_probabilities(rho, eigenbasis_measurement(rho))
    return {
        'dim': rho.dim,
        'eigenvalues': rho.eigenvalues().tolist(),
        'von_neumann_bits': von_neumann_entropy(rho),
        'eigenbasis_shannon_bits': shannon_entropy(eigen),
        'purity': purity(rho),
    }, 0


def cmd_bzinfo(args: argparse.Namespace) -> CommandResult:
    if args.probs:
        p = _parse_probs(args.probs)
        return {
            'n': p.n,
            'probabilities': p.to_list(),
            'normalized': args.normalized,
            'bz_value': bz_measure(p, args.normalized),
            'square_sum': square_sum(p),
        }, 0

    rho = _load_state(args)
    report = info_report(rho, mub_set(rho.dim), args.normalized)
    d = rho.dim
    closed_form = purity(rho) - 1 / d
    if args.normalized:
        closed_form *= d / (d - 1)
    document = {
        'dim': d,
        'normalized': args.normalized,
        'bases': {m.label: m.bz_value for m in report.basis_measures},
        'i_total': report.i_total,
        'closed_form': closed_form,
        'povm_bz': report.povm_bz,
    }
    rows = [{'label': m.label, 'bz_value': m.bz_value, 'i_total': report.i_total, 'povm_bz': report.povm_bz}
            for m in report.basis_measures]
    return Report(document, rows), 0


def cmd_report(args: argparse.Namespace) -> CommandResult:
    rho = _load_state(args)
    return info_report(rho, mub_set(rho.dim), args.normalized), 0


def cmd_mubs(args: argparse.Namespace) -> CommandResult:
    if args.dim is None:
        raise ValidationError("mubs: --dim is required")
    mubs = mub_set(args.dim, _optional_seed(args))
    document = mubs_to_document(mubs)
    document['seed'] = args.seed
    document['max_overlap_error'] = mubs.max_overlap_error()

    rows = []
    for basis in mubs:
        for label, vector in zip(basis.outcome_labels, basis.vectors()):
            row = {'basis': basis.label, 'outcome': label}
            for k, amplitude in enumerate(vector):
                row[f're_{k}'] = float(amplitude.real)
                row[f'im_{k}'] = float(amplitude.imag)
            rows.append(row)
    return Report(document, rows), 0


def cmd_povm_eq1(args: argparse.Namespace) -> CommandResult:
    rho = _load_state(args) if args.input else None
    dim = rho.dim if rho is not None else args.dim
    if dim is None:
        raise ValidationError("povm-eq1: --dim or --input is required")
    povm = eq1_povm(mub_set(dim, _optional_seed(args)))

    document = povm_to_document(povm)
    document['seed'] = args.seed
    document['completeness_residual'] = povm.completeness_residual()
    rows = [
        {
            'label': label,
            'trace': float(np.real(np.trace(element))),
            'min_eigenvalue': float(np.linalg.eigvalsh(element)[0]),
        }
        for label, element in zip(povm.labels, povm.elements)
    ]
    if rho is not None:
        q = povm_probabilities(rho, povm)
        document['probabilities'] = q.to_list()
        document['bz_value'] = bz_from_povm(rho, povm, args.normalized)
        for row, value in zip(rows, q.p):
            row['probability'] = float(value)
    return Report(document, rows), 0


def cmd_sequential(args: argparse.Namespace) -> CommandResult:
    rho = _load_state(args)
    mubs = mub_set(rho.dim, _optional_seed(args))
    for flag, index in (('--first', args.first), ('--second', args.second)):
        if not 0 <= index < len(mubs):
            raise ValidationError(f"{flag} {index} outside 0..{len(mubs) - 1}")
    first, second = mubs[args.first], mubs[args.second]

    joint = sequential_measure(rho, first, second)
    direct = measurement_probabilities(rho, second)
    after = joint.second_marginal()
    document = {
        'first': first.label,
        'second': second.label,
        'joint': joint.joint.tolist(),
        'first_marginal': joint.first_marginal().to_list(),
        'second_marginal': after.to_list(),
        'direct_second': direct.to_list(),
        'shannon_direct_bits': shannon_entropy(direct),
        'shannon_after_first_bits': shannon_entropy(after),
        'gap_bits': shannon_entropy(after) - shannon_entropy(direct),
    }
    rows = [
        {'first': a, 'second': b, 'probability': float(joint.joint[i, j])}
        for i, a in enumerate(first.outcome_labels)
        for j, b in enumerate(second.outcome_labels)
    ]
    return Report(document, rows), 0


def _experiment_command(name: str) -> Callable[[argparse.Namespace], CommandResult]:
    def run(args: argparse.Namespace) -> CommandResult:
        if args.normalized:
            logger.warning("--normalized has no effect on experiments; identities are checked in centred form")
        cfg = ExperimentConfig(
            name=name,
            dim=args.dim if args.dim is not None else 2,
            trials=args.trials,
            seed=_resolve_seed(args),
            tolerance=args.tolerance,
            workers=args.workers,
        )
        result = run_experiment(cfg)
        return result, 0 if result.passed else 1
    return run


COMMANDS: Dict[str, Callable[[argparse.Namespace], CommandResult]] = {
    'check': cmd_check,
    'entropy': cmd_entropy,
    'bzinfo': cmd_bzinfo,
    'report': cmd_report,
    'mubs': cmd_mubs,
    'povm-eq1': cmd_povm_eq1,
    'sequential': cmd_sequential,
    **{name: _experiment_command(name) for name in EXPERIMENTS},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='invariant-info',
        description="Information measures over complete sets of mutually unbiased bases",
        epilog=CSV_COLUMNS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')
    for name in COMMANDS:
        sub = subparsers.add_parser(name, epilog=CSV_COLUMNS_HELP,
                                    formatter_class=argparse.RawDescriptionHelpFormatter)
        _add_common_arguments(sub)
    return parser


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run one command, write its output; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    _configure_logging(args)
    try:
        payload, code = COMMANDS[args.command](args)
    except OSError as e:
        logger.error(f"❌ {e}")
        return 2
    except InvariantInfoError as e:
        logger.error(f"❌ {args.command}: {e}")
        return 2

    if not save_report(payload, args.out, args.format):
        return 2
    return code


def main() -> int:
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
