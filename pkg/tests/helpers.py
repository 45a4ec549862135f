"""Shared fixtures: canonical distributions used across test modules."""

import numpy as np

from cifc.channel import canonical_channel, random_channel
from cifc.probability import JointDistribution, RandomVariableSet, extend_through_channel
from cifc.regions import builtin_schema


def square_assignment() -> JointDistribution:
    """Noiseless anchor: auxiliaries degenerate except U1pb = X1, X2 uniform."""
    names = ("U1c", "U2c", "U1pb", "U2pb", "X1", "X2")
    sizes = (1, 1, 2, 1, 2, 2)
    prob = np.zeros(sizes)
    for a in range(2):
        for c in range(2):
            prob[0, 0, a, 0, a, c] = 0.25
    d = JointDistribution(RandomVariableSet(names, sizes), prob)
    return extend_through_channel(d, canonical_channel("orthogonal_noiseless"))


def degenerate_rtd_distribution() -> JointDistribution:
    """Every auxiliary and input constant; the region collapses to (0, 0)."""
    rtd = builtin_schema("RTD")
    rvs = rtd.rv_set(2, overrides=dict.fromkeys(rtd.variables, 1))
    d = JointDistribution(rvs, np.ones([1] * len(rtd.variables)))
    return extend_through_channel(d, random_channel(3, sizes=(1, 1, 2, 2)))
