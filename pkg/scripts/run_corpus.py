"""Verify every scenario in the bundled corpus (or a directory) and print a summary table.

    python scripts/run_corpus.py [directory]
"""
import sys
import time

from eigenbound.cli import corpus_files
from eigenbound.verifier.verify import load_spec, verify_spec


def main():
    directory = sys.argv[1] if len(sys.argv) > 1 else None
    print(f"{'scenario':<24} {'K':>8} {'k':>8} {'V':>9} {'d':>8} {'mu1':>10} {'bound':>10} {'margin':>10} ok")
    failures = 0
    for path in corpus_files(directory):
        t0 = time.perf_counter()
        rep = verify_spec(load_spec(path))
        ok = rep.satisfied and rep.assumptions_ok
        failures += not ok
        print(
            f"{rep.name:<24} {rep.K:8.4f} {rep.k:8.4f} {rep.volume:9.5f} {rep.diameter:8.5f} "
            f"{rep.mu1_domain:10.6f} {rep.breakdown.bound_value:10.6f} {rep.margin:10.3e} "
            f"{'yes' if ok else 'NO'}  ({time.perf_counter() - t0:.1f} s)"
        )
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
