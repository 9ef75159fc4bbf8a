"""High-precision stable densities for the frozen values in test_stable_law.

Two routes, both in mpmath and independent of the package:

* Fourier inversion of exp(-|t|**a (1 - i b sign(t) tan(pi a / 2))),
  usable where the density is not tiny;
* the Zolotarev integral over the angle, for the far tails.

Run: python3 tests/oracles/stable_density.py
"""

import mpmath as mp

mp.mp.dps = 30


def fourier(x, a, b):
    a, b, x = mp.mpf(a), mp.mpf(b), mp.mpf(x)
    k = b * mp.tan(mp.pi * a / 2)

    def integrand(t):
        return mp.exp(-(t**a)) * mp.cos(k * t**a - x * t)

    # fine breakpoints: the integrand oscillates with slowly decaying envelope
    return mp.quad(integrand, mp.linspace(0, 200, 401) + [mp.inf]) / mp.pi


def zolotarev(x, a, b):
    a, b, x = mp.mpf(a), mp.mpf(b), mp.mpf(x)
    if x < 0:
        x, b = -x, -b
    t0 = mp.atan(b * mp.tan(mp.pi * a / 2)) / a

    def V(th):
        return (
            mp.cos(a * t0) ** (1 / (a - 1))
            * (mp.cos(th) / mp.sin(a * (th + t0))) ** (a / (a - 1))
            * mp.cos(a * t0 + (a - 1) * th)
            / mp.cos(th)
        )

    def integrand(th):
        g = x ** (a / (a - 1)) * V(th)
        return g * mp.exp(-g)

    I = mp.quad(integrand, mp.linspace(-t0, mp.pi / 2, 17))
    return mp.re(a / (mp.pi * abs(a - 1) * x) * I)


FOURIER_POINTS = [
    (1.8, -1.0, -2.0),
    (1.8, -1.0, 0.0),
    (1.8, -1.0, 1.5),
    (1.5, 0.3, -0.7),
    (1.5, 0.3, 2.5),
    (1.2, 1.0, 0.4),
    (0.7, 0.5, 1.0),
    (0.7, -0.2, -3.0),
    (1.2, -1.0, 1.0),
    (1.2, -1.0, 3.0),
]

ZOLOTAREV_POINTS = [
    (1.8, -1.0, 3.0),
    (1.8, -1.0, 10.0),
    (1.8, -1.0, 30.0),
    (1.8, -1.0, -40.0),
    (1.5, 0.3, 50.0),
    (0.7, 0.5, 100.0),
    (1.8, 1.0, 40.0),
]

if __name__ == "__main__":
    print("FOURIER = [")
    for a, b, x in FOURIER_POINTS:
        print(f"    ({a}, {b}, {x}, {mp.nstr(fourier(x, a, b), 17)}),")
    print("]")
    print("ZOLOTAREV = [")
    for a, b, x in ZOLOTAREV_POINTS:
        print(f"    ({a}, {b}, {x}, {mp.nstr(zolotarev(x, a, b), 17)}),")
    print("]")
