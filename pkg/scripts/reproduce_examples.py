"""Print rank verdicts for the four three-species chain cases, with and without lumping.

Usage: python3 scripts/reproduce_examples.py [--k 1.0]
"""

import argparse
from dataclasses import dataclass

import numpy as np

from exactlump import classify, dual_lumped, is_controllable, is_observable, lump_system, make_scheme
from exactlump.cases import ALL_CASES, CHAIN3_M


@dataclass(frozen=True)
class Config:
    k: float = 1.0


def fmt(rep, dim):
    return f"{'yes' if rep.verdict else 'no '} (rank {rep.rank}/{dim})"


def run(cfg: Config) -> None:
    m = np.asarray(CHAIN3_M)
    print(f"M = {m.tolist()}, k = {cfg.k}")
    for name, make in ALL_CASES.items():
        sys = make(cfg.k)
        lumped = lump_system(sys, make_scheme(sys.a, m))
        dual = dual_lumped(sys, make_scheme(sys.a.T, m))
        print(f"{name:16s} controllable {fmt(is_controllable(sys), 3)} -> lumped {fmt(lumped.is_controllable(), 2)}"
              f" | observable {fmt(is_observable(sys), 3)} -> lumped {fmt(is_controllable(dual), 2)}")
    a = ALL_CASES["full_input"](cfg.k).a
    a_hat = make_scheme(a, m).a_hat
    print(f"Ahat = {np.round(a_hat, 12).tolist()}")
    for label, mat in (("A", a), ("Ahat", a_hat)):
        rep = classify(mat, s_override=2 * cfg.k)
        print(f"classify({label}, s=2k): {rep.classification.value}, rho = {rep.rho:.12g}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=float, default=Config.k)
    run(Config(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
