#!/usr/bin/env python3
"""Run every verification suite and write one JSON report per suite into a directory."""

import argparse
import json
import sys
import time
from pathlib import Path

from ellpolylog.suites import SUITES, SuiteOptions, report_passed, run_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--seed", type=int, default=SuiteOptions().seed)
    ap.add_argument("suites", nargs="*", default=list(SUITES))
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    ok = True
    for name in args.suites:
        t0 = time.perf_counter()
        rep = run_suite(name, SuiteOptions(seed=args.seed))
        dt = time.perf_counter() - t0
        (args.out / f"{name}.json").write_text(json.dumps(rep, sort_keys=True, indent=2) + "\n")
        good = report_passed(rep)
        ok &= good
        print(f"{name:20s} {'pass' if good else 'FAIL'} {dt:6.1f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
