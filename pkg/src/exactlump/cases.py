"""The three-species diffusion chain under the four input/output choices used as
regression cases, all lumped by ``M = [[2,1,0],[0,1,2]]``.

==========================  ==================================  =========================
function                    what is varied                      expected verdict
==========================  ==================================  =========================
``full_input_chain``        ``B = I``                           controllable, lumped too
``deficient_input_chain``   ``B = [[1,1,0],[1,0,0],[1,-1,0]]``  not controllable, lumped is
``observed_pairs_chain``    ``C = [[1,1,0],[0,1,1]]``           observable, lumped too
``lumped_output_chain``     ``C = M``                           not observable, lumped is
==========================  ==================================  =========================
"""

from __future__ import annotations

import numpy as np

from .compartmental import ChainSpec, gen_chain, standard_two_row_m
from .lti import LtiSystem

CHAIN3_M = standard_two_row_m(3)


def full_input_chain(k: float = 1.0) -> LtiSystem:
    return gen_chain(ChainSpec(3, k))


def deficient_input_chain(k: float = 1.0) -> LtiSystem:
    b = np.array([[1.0, 1.0, 0.0], [1.0, 0.0, 0.0], [1.0, -1.0, 0.0]])
    return gen_chain(ChainSpec(3, k), b=b)


def observed_pairs_chain(k: float = 1.0) -> LtiSystem:
    c = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]])
    return gen_chain(ChainSpec(3, k), c=c)


def lumped_output_chain(k: float = 1.0) -> LtiSystem:
    return gen_chain(ChainSpec(3, k), c=np.array(CHAIN3_M))


ALL_CASES = {
    "full_input": full_input_chain,
    "deficient_input": deficient_input_chain,
    "observed_pairs": observed_pairs_chain,
    "lumped_output": lumped_output_chain,
}
