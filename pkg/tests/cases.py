"""Random admissible line-soliton parameter sets shared by several tests."""
from fractions import Fraction

import numpy as np

from mgkp.params import ScaledParams
from mgkp.travelling import WaveFrame

QS = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))


def random_soliton_case(rng, q, sigma1, sigma2):
    """(sp, frame) with A > 0 and, when defocussing, 0 < A < C^2/|B|."""
    qf = float(q)
    if sigma1 == 1:
        a, b = rng.uniform(-1.5, 1.5, 2)
        mu = rng.uniform(-1.5, 1.5)
        A = rng.uniform(0.2, 3.0)
    else:
        a, b = 1.0, rng.uniform(0.5, 2.5)
        mu = rng.uniform(0.2, 1.5)
        C = (a + b) * mu / ((qf + 1) * (qf + 2))
        amax = C * C * (qf + 1) * (2 * qf + 1)
        A = amax * rng.uniform(0.05, 0.95)
    sp = ScaledParams(sigma1, sigma2, a, b, q)
    return sp, WaveFrame(mu, A + sigma2 * mu * mu)


def soliton_cases(seed=0, per=10):
    rng = np.random.default_rng(seed)
    out = []
    for q in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)):
        for s1 in (1, -1):
            for s2 in (1, -1):
                out += [random_soliton_case(rng, q, s1, s2) for _ in range(per)]
    return out


def random_grid_field(grid, rng, n_bumps=3, amp=1.0):
    """Sum of localized second x-derivatives of Gaussians (zero row means)."""
    from mgkp.grid import Field2D
    from mgkp.solver import gaussian_seed
    u = np.zeros((grid.Ny, grid.Nx))
    for _ in range(n_bumps):
        c = (rng.uniform(-0.1, 0.1) * grid.Lx, rng.uniform(-0.1, 0.1) * grid.Ly)
        w = rng.uniform(0.035, 0.05) * min(grid.Lx, grid.Ly)
        u += gaussian_seed(grid, rng.uniform(-amp, amp), w, c, order=2).u
    return Field2D(grid, u)
