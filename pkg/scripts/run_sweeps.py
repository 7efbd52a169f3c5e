"""Run every sweep at its default size and write JSON lines to results/.

    python scripts/run_sweeps.py [--out results] [--threads 4]
"""
import argparse
import json
import time
from pathlib import Path

from partialzeta.closed_forms import conjecture_sweep, galois_sweep
from partialzeta.sweeps import divisibility_sweep, expsum_sweep, rescalars_sweep

SWEEPS = {
    "conjecture": lambda a: conjecture_sweep(12, 5, 4),
    "galois": lambda a: galois_sweep(12, (2, 3, 4, 5, 7), 3),
    "divisibility": lambda a: divisibility_sweep(500, seed=0, threads=a.threads),
    "rescalars": lambda a: rescalars_sweep(100, seed=1),
    "expsum": lambda a: expsum_sweep(200, seed=2),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--only", choices=sorted(SWEEPS), action="append")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.only or SWEEPS:
        t0 = time.perf_counter()
        rep = SWEEPS[name](args)
        path = out / f"sweep_{name}.jsonl"
        with path.open("w") as fh:
            for rec in rep.records:
                fh.write(json.dumps(rec, sort_keys=True, default=str) + "\n")
        print(f"{name:13s} {len(rep.records):5d} records  {len(rep.violations):3d} violations  "
              f"{time.perf_counter() - t0:6.1f}s  -> {path}")


if __name__ == "__main__":
    main()
