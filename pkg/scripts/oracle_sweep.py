"""Extended-precision reference values (mpmath, 50 digits).

Independent of the package: D_d is evaluated straight from its defining
formula, derivatives by mpmath's numerical differentiation and x_d by plain
bisection. The printed numbers are the ones frozen in tests/.

    python scripts/oracle_sweep.py > oracle_table.txt
"""

import mpmath as mp

mp.mp.dps = 50

RHOS = ["0.1", "0.25", "0.5", "0.9", "1"]
DIMS = [1, 10, 100, 1000, 10000]


def sinc(y):
    return mp.mpf(1) if y == 0 else mp.sin(y) / y


def f(y):
    return 1 - mp.cos(y) + mp.sin(y) + sinc(y)


def D(d, x):
    y = mp.pi * x
    return f(y) ** d - sinc(y) ** d


def Dp(d, x):
    return mp.diff(lambda t: D(d, t), x)


def x_root(d, rho, steps=190):
    lo, hi = mp.mpf(0), mp.mpf(1) / 4
    for _ in range(steps):
        mid = (lo + hi) / 2
        if D(d, mid) < rho:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def main():
    print("sinc(pi/4)       ", mp.nstr(sinc(mp.pi / 4), 25))
    print("D_2(1/8)         ", mp.nstr(D(2, mp.mpf(1) / 8), 25))
    print("D'_1(0.1)        ", mp.nstr(Dp(1, mp.mpf("0.1")), 25))
    print("D''_2(0.05)      ", mp.nstr(mp.diff(lambda t: D(2, t), mp.mpf("0.05"), 2), 25))
    z = mp.findroot(lambda y: mp.diff(f, y, 2), 0.57)
    print("first zero of f'' (y, x)", mp.nstr(z, 25), mp.nstr(z / mp.pi, 25))
    print()
    print("rho d x_d ratio mp1 mp2 mp3")
    for r in RHOS:
        rho = mp.mpf(r)
        c = 1 + rho
        for d in DIMS:
            x = x_root(d, rho)
            w = mp.log(c) / (mp.pi * d)
            corr = mp.log(c) ** 2 / (6 * mp.pi * (1 + 1 / rho) * d**2)
            print(
                r,
                d,
                mp.nstr(x, 22),
                mp.nstr((x - w) / corr, 16),
                mp.nstr(d * (rho - D(d, w)), 16),
                mp.nstr(Dp(d, w) / d, 16),
                mp.nstr(Dp(d, x) / d, 16),
            )
    print()
    print("corollary sweep, rho = 1")
    for k in range(11):
        print(2**k, mp.nstr(x_root(2**k, mp.mpf(1)), 22))


if __name__ == "__main__":
    main()
