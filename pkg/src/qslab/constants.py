"""Fixed constants shared across the package."""

import math

import mpmath

# Working precision for every high-precision real in the package.
MP_DPS = 40

# Euler-Mascheroni constant, 60 digits.
GAMMA_STR = "0.577215664901532860606512090082402431042159335939923598805767"


def _mp(expr):
    with mpmath.workdps(MP_DPS + 10):
        return +expr()


GAMMA_MP = _mp(lambda: mpmath.mpf(GAMMA_STR))
SIGMA2_MP = _mp(lambda: 7 - 2 * mpmath.pi ** 2 / 3)
SIGMA_MP = _mp(lambda: mpmath.sqrt(SIGMA2_MP))
# (3 + 2 pi / sqrt 3): the L2 toll-error coefficient, and its square.
TOLL_COEF_MP = _mp(lambda: 3 + 2 * mpmath.pi / mpmath.sqrt(3))
TOLL_COEF_SQ_MP = _mp(lambda: TOLL_COEF_MP ** 2)

GAMMA = float(GAMMA_MP)
SIGMA2 = float(SIGMA2_MP)
SIGMA = float(SIGMA_MP)
TOLL_COEF = float(TOLL_COEF_MP)
TOLL_COEF_SQ = float(TOLL_COEF_SQ_MP)

# Density bounds for the limit law: sup f and sup |f'|.
DENSITY_SUP = 16.0
DENSITY_DERIV_SUP = 2466.0

assert 0.4202 < SIGMA2 < 0.4204
assert abs(GAMMA - 0.5772156649015329) < 1e-16
assert math.isclose(SIGMA, math.sqrt(SIGMA2))
