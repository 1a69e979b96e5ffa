"""Design a splitter chain for a target W state and run the transfer through it.

    python3 scripts/optics_demo.py 0.5 0.5 -0.5 0.5
"""
import argparse

import numpy as np

from wsim.entanglement import WSpec
from wsim.optics import cavity_register, design_chain, simulate_chain, transfer_through_cavities
from wsim.protocols import run_qst
from wsim.qstate import StateVector


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("coeffs", type=float, nargs="+", help="real target coefficients (normalized for you)")
    args = ap.parse_args()

    w = WSpec.normalized(args.coeffs)
    chain = design_chain(w)
    modes = simulate_chain(chain)
    captured, _ = cavity_register(modes)
    for k, (r, t) in enumerate(zip(chain.reflectivities, chain.transmissivities), start=1):
        print(f"splitter {k}: r = {r:.6f}  t = {t:.6f}")
    print("mode amplitudes:", np.round(modes.amplitudes, 6))
    print(f"round-trip error: {np.abs(captured.coeffs - w.coeffs).max():.2e}")
    psi = StateVector(1, [0.6, 0.8])
    via_optics = transfer_through_cavities(chain, psi).success_probability
    print(f"transfer success: {via_optics:.6f} (direct {run_qst(w, psi).success_probability:.6f})")


if __name__ == "__main__":
    main()
