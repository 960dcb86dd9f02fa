#!/usr/bin/env python3
"""
Run every experiment at acceptance scale and write the results
This is the entry point for a full verification pass
"""

import logging
import sys
import time
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from invariant_info import ExperimentConfig, InvariantInfoError, ReportGenerator, run_experiment  # noqa: E402

logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

# (experiment, dims, trials) at the scale of the acceptance checks
PLAN = [
    ('povm-invariant', (2, 3), 100),
    ('invariance', (2, 3, 5), 500),
    ('diagonal-eq', (2, 3, 5), 500),
    ('grouping-demo', (2,), 1000),
    ('haar-avg', (2, 3), 100_000),
    ('witness', (2,), 1),
]


def main(seed: int = 0) -> int:
    """Run the plan; 0 when everything passes, 1 on any failure, 2 on errors"""
    print("🚀 Starting invariant information experiments...")

    results_dir = Path(__file__).parent.parent / 'results'
    results_dir.mkdir(exist_ok=True)
    generator = ReportGenerator()

    passed, failed, errored = [], [], []
    for name, dims, trials in PLAN:
        for dim in dims:
            label = f"{name} (dim {dim})"
            started = time.perf_counter()
            try:
                result = run_experiment(ExperimentConfig(name=name, dim=dim, trials=trials, seed=seed))
            except InvariantInfoError as e:
                print(f"💥 {label}: {e}")
                errored.append(label)
                continue
            elapsed = time.perf_counter() - started

            stem = results_dir / f"{name}_d{dim}"
            generator.generate_file(result, stem.with_suffix('.json'), 'json')
            generator.generate_file(result, stem.with_suffix('.csv'), 'csv')

            if result.passed:
                print(f"✅ {label}: max residual {result.summary['max_residual']:.2e} ({elapsed:.1f}s)")
                passed.append(label)
            else:
                print(f"❌ {label}: max residual {result.summary['max_residual']:.2e} ({elapsed:.1f}s)")
                failed.append(label)

    print(f"\n📊 {len(passed)} passed, {len(failed)} failed, {len(errored)} errors")
    print(f"📁 Results written to {results_dir}")
    if errored:
        return 2
    if failed:
        return 1
    print("🎉 All experiments passed!")
    return 0


if __name__ == "__main__":
    sys.exit(main())
