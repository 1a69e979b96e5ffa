"""Transfer success probability across coefficient imbalance.

Sweeps |c_1|^2 with |c_N|^2 fixed and the remaining weight spread evenly over
the middle qubits, comparing the enumerated success probability with
2 min(|c_1|^2, |c_N|^2) and a sampled estimate.

    python3 scripts/qst_sweep.py --n 5 --points 9 --trials 20000
"""
import argparse

import numpy as np

from wsim.entanglement import WSpec
from wsim.protocols import run_qst, sample_report
from wsim.qstate import StateVector


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--bob-weight", type=float, default=0.2, help="|c_N|^2")
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    psi = StateVector(1, [0.6, 0.8j])
    free = 1 - args.bob_weight
    print(f"{'|c1|^2':>8} {'enumerated':>11} {'2 min':>8} {'sampled':>8}")
    for a in np.linspace(0, free, args.points):
        middle = np.full(args.n - 2, np.sqrt((free - a) / (args.n - 2)))
        w = WSpec(np.concatenate([[np.sqrt(a)], middle, [np.sqrt(args.bob_weight)]]))
        report = run_qst(w, psi)
        sampled = sample_report(report, args.trials, args.seed)["rate"]
        print(f"{a:>8.3f} {report.success_probability:>11.6f} "
              f"{2 * min(a, args.bob_weight):>8.4f} {sampled:>8.4f}")


if __name__ == "__main__":
    main()
