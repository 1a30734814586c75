// Generated by tests/oracles/gen_oracle_values.py -- do not edit by hand.
#pragma once

#include <complex>

namespace oracle {

// (order m, argument r, J_m(r)) from a 200-term arbitrary-precision series.
struct BesselRef { double m; double r; double value; };
inline constexpr BesselRef kBesselRefs[] = {
    {0.0, 0.50000000000000000, 0.93846980724081290423},
    {0.0, 1.0000000000000000, 0.76519768655796655145},
    {0.0, 10.000000000000000, -0.24593576445134833520},
    {0.0, 25.000000000000000, 0.096266783275958116174},
    {0.0, 50.000000000000000, 0.055812327669251815005},
    {0.50000000000000000, 0.50000000000000000, 0.54097378993452809133},
    {0.50000000000000000, 1.0000000000000000, 0.67139670714180309042},
    {0.50000000000000000, 10.000000000000000, -0.13726373575505048121},
    {0.50000000000000000, 25.000000000000000, -0.021120283599650445018},
    {0.50000000000000000, 50.000000000000000, -0.029605831888924612568},
    {1.0000000000000000, 0.50000000000000000, 0.24226845767487388638},
    {1.0000000000000000, 1.0000000000000000, 0.44005058574493351596},
    {1.0000000000000000, 10.000000000000000, 0.043472746168861436670},
    {1.0000000000000000, 25.000000000000000, -0.12535024958028990465},
    {1.0000000000000000, 50.000000000000000, -0.097511828125175137661},
    {1.5000000000000000, 0.50000000000000000, 0.091701699625651302638},
    {1.5000000000000000, 1.0000000000000000, 0.24029783912342701090},
    {1.5000000000000000, 10.000000000000000, 0.19798249275589310480},
    {1.5000000000000000, 25.000000000000000, -0.15901789538603657984},
    {1.5000000000000000, 50.000000000000000, -0.10947687298831803539},
    {2.0000000000000000, 0.50000000000000000, 0.030604023458682641307},
    {2.0000000000000000, 1.0000000000000000, 0.11490348493190048047},
    {2.0000000000000000, 10.000000000000000, 0.25463031368512062253},
    {2.0000000000000000, 25.000000000000000, -0.10629480324238130855},
    {2.0000000000000000, 50.000000000000000, -0.059712800794258820511},
};

// (n, r, sign, E(r)) for the error kernel, by mpmath quadrature (y=u^2).
struct ErrorKernelRef { int n; double r; int sign; std::complex<double> value; };
inline const ErrorKernelRef kErrorKernelRefs[] = {
    {2, 1.0000000000000000, +1, {0.050291598608661389706, 0.12014366782286711291}},
    {2, 8.0000000000000000, +1, {0.0045166452064962877284, 0.0051891407756488080062}},
    {4, 3.0000000000000000, +1, {0.022796568845010799636, -0.018790515202624306473}},
    {5, 10.000000000000000, -1, {0.0020000000000000000000, 0.0}},
    {5, 2.0000000000000000, +1, {0.25000000000000000000, 0.0}},
};

// (f dsigma)^v at (t, r) = (1.3, 0.7) for F==1 on [1,2], n=2; 2-D polar quadrature.
inline const std::complex<double> kExtension2dRef{-1.4041091852403116404, 4.0809376013437311383};

}  // namespace oracle
