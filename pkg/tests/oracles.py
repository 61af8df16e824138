"""High-precision reference computations, independent of the package code."""

import mpmath as mp

mp.mp.dps = 40


def H(x):
    x = mp.mpf(x)
    if x in (0, 1):
        return mp.mpf(0)
    return -x * mp.log(x, 2) - (1 - x) * mp.log(1 - x, 2)


def eig2(a, d, b):
    """Eigenvalues of the real symmetric [[a, b], [b, d]], descending."""
    a, d, b = mp.mpf(a), mp.mpf(d), mp.mpf(b)
    tr, det = a + d, a * d - b * b
    r = mp.sqrt(tr * tr - 4 * det)
    return (tr + r) / 2, (tr - r) / 2


def bloch_entropy(x, y, z):
    n = mp.sqrt(mp.mpf(x) ** 2 + mp.mpf(y) ** 2 + mp.mpf(z) ** 2)
    return H((1 - n) / 2)


def splaying_pair_chi(psi):
    a = 1 / mp.sqrt(3)
    x1, z1 = a, mp.mpf(1) / 3
    x2, z2 = a * mp.cos(psi), (1 - mp.sin(psi)) / 3
    mix = bloch_entropy((x1 + x2) / 2, 0, (z1 + z2) / 2)
    return mix - (bloch_entropy(x1, 0, z1) + bloch_entropy(x2, 0, z2)) / 2


def splaying_argmax():
    psi = mp.findroot(lambda p: mp.diff(splaying_pair_chi, p), 3.2)
    return psi, splaying_pair_chi(psi)
