#pragma once

#include "conelab/bessel.hpp"
#include "conelab/profile.hpp"
#include "conelab/quadrature.hpp"
#include "conelab/types.hpp"

namespace conelab {

struct SpacetimePoint {
    double t = 0.0;
    double r = 0.0;
    int n = 2;
};

struct ExtensionValue {
    complexd value{0.0, 0.0};
    double abs_error = 0.0;
};

// Exact constants of the main/error split, fixed by contour deformation of the
// integral representation of J_m (principal branch for (y +- 2i)^{(n-3)/2}):
//
//   u(t, r) = r^{-(n-1)/2} [ a_plus G(t + r) + a_minus G(t - r) ]
//           + k_err [ H_+(t - r) - H_-(t + r) ],
//
//   G(tau)  = int F(s) s^{(n-3)/2} e^{i tau s} ds,
//   H_+-(tau) = int F(s) s^{n-2} E_+-(r s) e^{i tau s} ds.
struct DecompositionConstants {
    int n = 2;
    double c_n = 0.0;       // (2 pi)^{n/2}
    double m = 0.0;         // (n-2)/2
    double gamma = 0.0;     // (n-3)/2
    double theta = 0.0;     // (n-3) pi / 4
    complexd a_plus{0.0, 0.0};
    complexd a_minus{0.0, 0.0};
    complexd k_err{0.0, 0.0};
};

DecompositionConstants decomposition_constants(int n);

// (f dsigma)^v(t, x) by the polar formula
//   c_n int F(s) s^{n-2} jt_m(r s) e^{its} ds,   jt_m(rho) = rho^{-m} J_m(rho),
// valid for all r >= 0 (the scaled Bessel function removes the 0/0 form).
ExtensionValue extension_direct(const RadialProfile& F, const SpacetimePoint& pt);

// Two-exponential main term; far field only (r >= 1).
ExtensionValue main_term(const RadialProfile& F, const SpacetimePoint& pt);

// Exponentially weighted remainder; far field only (r >= 1), identically 0 at
// n = 3.
ExtensionValue error_term(const RadialProfile& F, const SpacetimePoint& pt);

// --- evaluator building blocks shared with the norm machinery ---------------

// E_+((n-3)/2) on [rho_lo, rho_hi] as a log-Chebyshev proxy; E_- is its
// pointwise conjugate.
ChebyshevProxy build_error_kernel_proxy(int n, double rho_lo, double rho_hi, int order = 48);

// A(s) = F(s) s^{(n-3)/2}.
PiecewiseAmplitude main_term_amplitude(const RadialProfile& F, int n);
// A(s) = F(s) s^{n-2} E_+(r s), E_+ through the proxy.
PiecewiseAmplitude error_term_amplitude(const RadialProfile& F, int n, double r, const ChebyshevProxy& eplus);
// A(s) = c_n F(s) s^{n-2} jt_m(r s); only for r * support_hi below the series
// switch (the direct route is a near-field tool).
PiecewiseAmplitude direct_amplitude(const RadialProfile& F, int n, double r);

}  // namespace conelab
