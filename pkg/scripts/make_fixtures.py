"""Regenerate the JSON fixtures under fixtures/ (systems and lumping matrices)."""

import json
from pathlib import Path

import numpy as np

from exactlump import ChainSpec, LtiSystem, gen_chain, standard_two_row_m
from exactlump import cases
from exactlump.io import write_system

OUT = Path(__file__).resolve().parents[1] / "fixtures"


def write_m(name, m, comment=None):
    obj = {"M": np.asarray(m).tolist()}
    if comment:
        obj["comment"] = comment
    (OUT / name).write_text(json.dumps(obj) + "\n")


def lumped_rate_comment(n):
    rate = "k/2" if n == 3 else "k"
    return f"exact lumping of the n={n} chain; computed Ahat = [[-{rate}, {rate}], [{rate}, -{rate}]]"


def main():
    OUT.mkdir(exist_ok=True)
    for name, make in cases.ALL_CASES.items():
        write_system(OUT / f"{name}.json", make(1.0), k_comment="k = 1")
    for n in (3, 4, 6, 8):
        write_system(OUT / f"chain{n}.json", gen_chain(ChainSpec(n, 1.0)), k_comment="k = 1")
        write_m(f"chain{n}_m.json", standard_two_row_m(n), lumped_rate_comment(n))
    write_m("chain3_truncation_m.json", [[1, 0, 0], [0, 1, 0]])
    chain3 = gen_chain(ChainSpec(3, 1.0))
    write_system(OUT / "zero_input.json", chain3.with_matrices(b=np.zeros((3, 3))), k_comment="k = 1")
    write_system(OUT / "identity_a.json", LtiSystem(np.eye(3), np.eye(3), np.eye(3)))


if __name__ == "__main__":
    main()
