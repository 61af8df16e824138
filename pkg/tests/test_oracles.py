"""Frozen values used elsewhere, re-derived from the mpmath oracles."""

import mpmath as mp
import pytest

from oracles import H, eig2, splaying_argmax, splaying_pair_chi

FROZEN = {
    "H(1/3)": (lambda: H(mp.mpf(1) / 3), 0.9182958340544895),
    "H(1/6)": (lambda: H(mp.mpf(1) / 6), 0.6500224216483542),
    "1-H(1/6)": (lambda: 1 - H(mp.mpf(1) / 6), 0.3499775783516458),
    "1-H(1/3)": (lambda: 1 - H(mp.mpf(1) / 3), 0.0817041659455105),
    "amp(0.5)": (lambda: H(mp.mpf(1) / 4) - H((1 - mp.sqrt(mp.mpf(3) / 4)) / 2), 0.4566992217938630),
    "eig(eq33, 0.5)[0]": (lambda: eig2(mp.mpf(1.5) / 2, mp.mpf(0.5) / 2, mp.sqrt(0.5) / 2)[0], 0.9330127018922193),
    "splaying chi(pi)": (lambda: splaying_pair_chi(mp.pi), 0.2682734124061353),
    "splaying max": (lambda: splaying_argmax()[1], 0.2686676776443634),
    "splaying argmax": (lambda: splaying_argmax()[0], 3.2002116963041956),
}


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_frozen_value(name):
    oracle, frozen = FROZEN[name]
    assert float(oracle()) == pytest.approx(frozen, abs=1e-15)
