"""Regenerate the Chebyshev coefficient tables embedded in quasimorse.specfun.

Each table is a Chebyshev interpolant of a scaled Bessel function on a
semi-infinite interval, mapped to w in (-1, 1]:

    K0, K1 :  f(x) = K(x) * exp(x) * sqrt(x),   w = 2*(XC/x) - 1,   x > XC = 2
    J0, Y0 :  Hankel moduli P(x), Q(x) with
              J0 = sqrt(2/(pi x)) * (P cos(x - pi/4) - Q sin(x - pi/4))
              Y0 = sqrt(2/(pi x)) * (P sin(x - pi/4) + Q cos(x - pi/4))
              P and Qt := Q*x/XC are fitted in w = 2*(XC/x)^2 - 1,  x > XC = 5
    I0     :  f(x) = I0(x) * exp(-x) * sqrt(x),  w = 2*(XC/x) - 1,   x > XC = 18

Coefficients come from exact function values (mpmath, 50 digits) at Chebyshev
nodes followed by a discrete cosine transform; they are truncated where the
tail drops below 1e-19.  Run this script and paste its output into specfun.py
whenever the crossover points change.
"""

import mpmath as mp

mp.mp.dps = 50

NODES = 64


def cheb_coeffs(f, n=NODES):
    """Chebyshev interpolation coefficients of f on w in [-1, 1]."""
    xs = [mp.cos(mp.pi * (j + mp.mpf(1) / 2) / n) for j in range(n)]
    vals = [f(x) for x in xs]
    coeffs = []
    for k in range(n):
        s = mp.fsum(vals[j] * mp.cos(mp.pi * k * (j + mp.mpf(1) / 2) / n)
                    for j in range(n))
        coeffs.append(2 * s / n)
    coeffs[0] /= 2
    return coeffs


def truncate(coeffs, tol=mp.mpf("1e-19")):
    last = max(i for i, c in enumerate(coeffs[:48]) if abs(c) > tol)
    return coeffs[: last + 1]


def emit(name, coeffs):
    print(f"{name} = np.array([")
    for c in coeffs:
        print(f"    {mp.nstr(c, 20)},")
    print("])")
    print()


def k_scaled(order, xc):
    def f(w):
        x = 2 * xc / (w + 1)
        return mp.besselk(order, x) * mp.exp(x) * mp.sqrt(x)
    return f


def i0_scaled(xc):
    def f(w):
        x = 2 * xc / (w + 1)
        return mp.besseli(0, x) * mp.exp(-x) * mp.sqrt(x)
    return f


def hankel_pq(x):
    om = x - mp.pi / 4
    pref = mp.sqrt(mp.pi * x / 2)
    j0, y0 = mp.besselj(0, x), mp.bessely(0, x)
    p = pref * (j0 * mp.cos(om) + y0 * mp.sin(om))
    q = pref * (y0 * mp.cos(om) - j0 * mp.sin(om))
    return p, q


def hankel_tables(xc):
    def fp(w):
        t2 = (w + 1) / 2
        x = xc / mp.sqrt(t2)
        return hankel_pq(x)[0]

    def fq(w):
        t2 = (w + 1) / 2
        t = mp.sqrt(t2)
        x = xc / t
        return hankel_pq(x)[1] / t
    return cheb_coeffs(fp), cheb_coeffs(fq)


if __name__ == "__main__":
    emit("_K0_CHEB", truncate(cheb_coeffs(k_scaled(0, 2))))
    emit("_K1_CHEB", truncate(cheb_coeffs(k_scaled(1, 2))))
    emit("_I0_CHEB", truncate(cheb_coeffs(i0_scaled(18))))
    p, q = hankel_tables(5)
    emit("_P0_CHEB", truncate(p))
    emit("_Q0_CHEB", truncate(q))
