#pragma once

#include <span>
#include <utility>
#include <vector>

#include "conelab/types.hpp"

namespace conelab {

// Nonnegative real order; the artifact instantiates m = (n-2)/2 for ambient
// dimension n >= 2.
struct BesselOrder {
    double m = 0.0;

    explicit BesselOrder(double order) : m(order) {
        if (!(m >= 0.0)) throw std::invalid_argument("BesselOrder: order must be >= 0");
    }
    static BesselOrder from_dimension(int n) {
        if (n < 2) throw std::invalid_argument("BesselOrder: dimension must be >= 2");
        return BesselOrder(0.5 * (n - 2));
    }
    bool is_half_integer() const {
        const double k = m - 0.5;
        return k >= 0.0 && k == std::floor(k);
    }
};

enum class ErrorKernelSign { kPlus, kMinus };

struct BesselValue {
    complexd value{0.0, 0.0};
    double abs_error = 0.0;
};

// J_m(r).  Dispatches between the power series (r < 12), the closed
// half-integer forms, and the main+error representation (r >= 12); the paths
// agree on overlaps.
BesselValue bessel_j(BesselOrder order, double r);

// Individual evaluation paths, exposed for cross-validation.
BesselValue bessel_j_series(BesselOrder order, double r);
BesselValue bessel_j_half_integer(BesselOrder order, double r);
BesselValue bessel_j_asymptotic(BesselOrder order, double r);

// Leading two-exponential term sqrt(2/(pi r)) sin(r - (2m-1)pi/4); equals
// J_{1/2} exactly at m = 1/2.
complexd bessel_main_term(BesselOrder order, double r);

// E(r) = int_0^inf e^{-ry} y^{(n-3)/2} [ (y +- 2i)^{(n-3)/2} - (+-2i)^{(n-3)/2} ] dy
// for r >= 1; identically 0 at n = 3.  quadrature after y = u^2.
BesselValue error_kernel(int n, double r, ErrorKernelSign sign);
// Same integral at general exponent mu = (n-3)/2 (internal gateway for the
// remainder of J_m with mu = m - 1/2); r > 0.
BesselValue error_kernel_mu(double mu, double r, ErrorKernelSign sign);
// One refinement notch for stability checks.
BesselValue error_kernel_refined(int n, double r, ErrorKernelSign sign);

// Full remainder J_m(r) - main term, assembled from the two error kernels:
// (r/2)^m / (Gamma(m+1/2) sqrt(pi)) * i * (e^{-ir} E_+(r) - e^{ir} E_-(r)).
BesselValue bessel_remainder(BesselOrder order, double r);

// Normalized products (r, |E(r)| r^{(n+1)/2}) over an increasing grid in
// [1, 1e3]; bounded by the decay estimate.
std::vector<std::pair<double, double>> verify_error_bound(int n, std::span<const double> r_grid);

// Entire scaled function jt_m(rho) = rho^{-m} J_m(rho) and its first two
// derivatives; jt_m(0) = 2^{-m}/Gamma(m+1).
double bessel_j_scaled(double m, double rho);
double bessel_j_scaled_d1(double m, double rho);
double bessel_j_scaled_d2(double m, double rho);

}  // namespace conelab
