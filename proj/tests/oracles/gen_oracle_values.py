#!/usr/bin/env python3
"""Regenerates tests/oracle_values.hpp.

All reference numbers asserted by the C++ test suites are produced here with
mpmath at 50 significant digits, by methods independent of the C++ code paths:

  * Bessel values: direct summation of the ascending power series (200 terms,
    arbitrary precision), cross-checked against mpmath.besselj.
  * Error-kernel values: semi-infinite quadrature of the defining integral
    after the y = u^2 substitution, via mpmath.quad on [0, inf).
  * Plane-annulus extension value: literal 2-D polar quadrature of
    int_{1<=|xi|<=2} exp(i(x.xi + t|xi|)) dxi/|xi|, no Bessel reduction.

Run:  python3 tests/oracles/gen_oracle_values.py > tests/oracle_values.hpp
"""

import mpmath as mp

mp.mp.dps = 50


def bessel_series(m, r, terms=200):
    """Ascending series sum_k (-1)^k (r/2)^{2k+m} / (k! Gamma(k+m+1)).

    Summed at elevated precision: the terms grow to ~(r/2)^{2k}/k!^2 before
    cancelling, which costs ~20 digits at r=50.
    """
    with mp.workdps(mp.mp.dps + 40):
        m = mp.mpf(m)
        r = mp.mpf(r)
        total = mp.mpf(0)
        for k in range(terms):
            t = (-1) ** k * (r / 2) ** (2 * k + m) / (mp.factorial(k) * mp.gamma(k + m + 1))
            total += t
    return total


def error_kernel(n, r, sign):
    """E(r) = int_0^inf e^{-ry} y^mu [ (y + s*2i)^mu - (s*2i)^mu ] dy, mu=(n-3)/2."""
    mu = (mp.mpf(n) - 3) / 2
    c = mp.mpc(0, 2 * sign)
    f = lambda u: mp.e ** (-r * u * u) * (u * u) ** mu * ((u * u + c) ** mu - c ** mu) * 2 * u
    return mp.quad(f, [0, mp.inf])


def extension_2d(t, r):
    """(f dsigma)^v for F==1 on [1,2], n=2, by literal 2-D polar quadrature."""
    t = mp.mpf(t)
    r = mp.mpf(r)
    inner = lambda rho: mp.quad(lambda th: mp.e ** (1j * r * rho * mp.cos(th)), [0, mp.pi, 2 * mp.pi])
    return mp.quad(lambda rho: mp.e ** (1j * t * rho) * inner(rho), [1, mp.mpf(3) / 2, 2])


def cxx(x, digits=20):
    return mp.nstr(x, digits, strip_zeros=False)


def main():
    print("// Generated by tests/oracles/gen_oracle_values.py -- do not edit by hand.")
    print("#pragma once")
    print()
    print("#include <complex>")
    print()
    print("namespace oracle {")
    print()

    print("// (order m, argument r, J_m(r)) from a 200-term arbitrary-precision series.")
    print("struct BesselRef { double m; double r; double value; };")
    print("inline constexpr BesselRef kBesselRefs[] = {")
    for m in [0, mp.mpf(1) / 2, 1, mp.mpf(3) / 2, 2]:
        for r in [mp.mpf(1) / 2, 1, 10, 25, 50]:
            v = bessel_series(m, r)
            check = mp.besselj(m, r)
            assert abs(v - check) < mp.mpf(10) ** (-40), (m, r)
            print(f"    {{{cxx(mp.mpf(m), 17)}, {cxx(mp.mpf(r), 17)}, {cxx(v)}}},")
    print("};")
    print()

    print("// (n, r, sign, E(r)) for the error kernel, by mpmath quadrature (y=u^2).")
    print("struct ErrorKernelRef { int n; double r; int sign; std::complex<double> value; };")
    print("inline const ErrorKernelRef kErrorKernelRefs[] = {")
    for (n, r, sign) in [(2, 1, +1), (2, 8, +1), (4, 3, +1), (5, 10, -1), (5, 2, +1)]:
        v = error_kernel(n, r, sign)
        print(f"    {{{n}, {cxx(mp.mpf(r), 17)}, {sign:+d}, {{{cxx(v.real)}, {cxx(v.imag)}}}}},")
    print("};")
    print()

    v = extension_2d(mp.mpf("1.3"), mp.mpf("0.7"))
    print("// (f dsigma)^v at (t, r) = (1.3, 0.7) for F==1 on [1,2], n=2; 2-D polar quadrature.")
    print(f"inline const std::complex<double> kExtension2dRef{{{cxx(v.real)}, {cxx(v.imag)}}};")
    print()
    print("}  // namespace oracle")


if __name__ == "__main__":
    main()
