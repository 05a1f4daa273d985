"""Independent reference values frozen into the C++ tests.

Run once with `python3 tests/oracles/compute_oracles.py`; the printed numbers are
pasted into tests/oracle_values.hpp. Nothing here shares code with the library.
"""
import mpmath as mp
import numpy as np
from scipy.linalg import eigh_tridiagonal


def flat_integral():
    mp.mp.dps = 50
    f = lambda y: mp.e ** (-1 / y) if y > 0 else mp.mpf(0)
    val = mp.quad(f, [0, mp.mpf("0.001"), mp.mpf("0.005"), mp.mpf("0.01")])
    x = mp.mpf("0.01")
    # endpoint asymptotic: x^2 e^{-1/x} (1 - 2x + 6x^2 - 24x^3 ...)
    asym = x**2 * mp.e ** (-1 / x) * (1 - 2 * x + 6 * x**2 - 24 * x**3)
    return val, asym


def schrodinger_ground(alpha, zeta, n, R=1.0):
    # n nodes including both Dirichlet boundary nodes
    y = np.linspace(-R, R, n)[1:-1]
    h = 2 * R / (n - 1)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(y == 0, 0.0, np.exp(-np.abs(y) ** (-alpha)))
    d = 2 / h**2 + a * zeta**2
    e = -np.ones(len(y) - 1) / h**2
    return eigh_tridiagonal(d, e, select="i", select_range=(0, 0), eigvals_only=True)[0]


def mp_slope_sign(alpha, p):
    # S along decisive intervals I=[0,h]: h^{1/p} (3h)^{-alpha}
    hs = np.logspace(-6, -2, 50)
    S = hs ** (1 / p) * (3 * hs) ** (-alpha)
    return np.sign(np.polyfit(np.log(hs), np.log(S), 1)[0])


if __name__ == "__main__":
    v, a = flat_integral()
    print("flat_integral_exp_inv_0_001 =", mp.nstr(v, 30))
    print("flat_integral_asymptotic    =", mp.nstr(a, 30))
    print("schrodinger alpha=1 zeta=e^6 n=8193:", repr(schrodinger_ground(1.0, np.exp(6), 8193)))
    for alpha in (0.5, 1.0, 2.0):
        print(f"fine alpha={alpha} zeta=e^10 n=32769:", repr(schrodinger_ground(alpha, np.exp(10), 32769)))
        print(f"     alpha={alpha} zeta=e^10 n=8193: ", repr(schrodinger_ground(alpha, np.exp(10), 8193)))
    for alpha in (0.25, 0.5, 0.8, 1.25, 2, 4):
        print(alpha, [int(mp_slope_sign(alpha, p)) for p in (0.5, 1, 2)])
