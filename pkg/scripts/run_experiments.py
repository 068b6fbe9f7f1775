"""Run the shipped exponent experiments and write one JSON and one CSV file each."""

import argparse
import json
import time
from pathlib import Path

from cubelab import lab


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--only", nargs="*", help="spec names or short tags (default: all)")
    ap.add_argument("--budget", type=float, default=1e10)
    ap.add_argument("--cache-dir", default=None)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = [lab.resolve(n) for n in args.only] if args.only else list(lab.SHIPPED)
    for name in names:
        t0 = time.perf_counter()
        report = lab.run_experiment(lab.SHIPPED[name], budget=args.budget, cache_dir=args.cache_dir)
        (out / f"{name}.json").write_text(json.dumps(report, indent=2) + "\n")
        (out / f"{name}.csv").write_text(lab.report_csv(report))
        slope = report.get("slope")
        slope_txt = "n/a" if slope is None else f"{slope:.3f}"
        print(f"{name:20s} slope {slope_txt:>7s}  asserted {report['exponent']:.3f} ({report['bound']})  "
              f"verdict {report['verdict']:12s} slope_ok {report['slope_ok']}  {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
