#include "conelab/bessel.hpp"

#include <cmath>

#include "conelab/quadrature.hpp"

namespace conelab {

namespace {

// --- minimal double-double arithmetic ----------------------------------------
// The ascending series cancels catastrophically for r beyond ~20 (terms grow to
// ~3e19 at r=50 while the sum is O(1)), so the term recurrence and the
// accumulator run in ~32-digit double-double precision.

struct DD {
    double hi = 0.0, lo = 0.0;
};

inline DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DD dd_div_d(DD a, double d) {
    const double q1 = a.hi / d;
    const DD p = two_prod(q1, d);
    const double e = ((a.hi - p.hi) - p.lo + a.lo) / d;
    return quick_two_sum(q1, e);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

// sum_k (-x)^k / (k! Gamma(k+m+1)) * Gamma(m+1)  -- i.e. the series normalized
// to start at 1; the caller multiplies by the prefactor.  Returns the sum and
// (through l1_out) the sum of absolute terms for the rounding estimate.
DD series_core(double m, double x, double* l1_out) {
    DD term{1.0, 0.0};
    DD sum = term;
    double l1 = 1.0;
    const DD mx = {-x, 0.0};
    for (int k = 0; k < 400; ++k) {
        term = dd_mul(term, mx);
        term = dd_div_d(term, static_cast<double>(k + 1));
        term = dd_div_d(term, static_cast<double>(k) + m + 1.0);
        sum = dd_add(sum, term);
        l1 += std::abs(term.hi);
        if (std::abs(term.hi) < 1e-34 * l1 && k > 4) break;
    }
    if (l1_out) *l1_out = l1;
    return sum;
}

constexpr double kSeriesSwitch = 12.0;

}  // namespace

double bessel_j_scaled(double m, double rho) {
    const double x = 0.25 * rho * rho;
    const DD s = series_core(m, x, nullptr);
    return std::pow(2.0, -m) / std::tgamma(m + 1.0) * (s.hi + s.lo);
}

double bessel_j_scaled_d1(double m, double rho) { return -rho * bessel_j_scaled(m + 1.0, rho); }

double bessel_j_scaled_d2(double m, double rho) {
    return -bessel_j_scaled(m + 1.0, rho) + rho * rho * bessel_j_scaled(m + 2.0, rho);
}

BesselValue bessel_j_series(BesselOrder order, double r) {
    if (r < 0.0) throw std::invalid_argument("bessel_j_series: r must be >= 0");
    const double m = order.m;
    const double x = 0.25 * r * r;
    double l1 = 0.0;
    const DD s = series_core(m, x, &l1);
    const double prefactor = std::pow(0.5 * r, m) / std::tgamma(m + 1.0);
    const double value = prefactor * (s.hi + s.lo);
    const double abs_error = prefactor * (l1 * 1e-31) + 4e-16 * std::abs(value) + 1e-300;
    return {complexd(value, 0.0), abs_error};
}

BesselValue bessel_j_half_integer(BesselOrder order, double r) {
    if (!order.is_half_integer()) throw std::invalid_argument("bessel_j_half_integer: order must be in N+1/2");
    if (!(r > 0.0)) throw std::invalid_argument("bessel_j_half_integer: r must be > 0");
    const double amp = std::sqrt(2.0 / (kPi * r));
    double jm1 = amp * std::sin(r);  // J_{1/2}
    if (order.m == 0.5) return {complexd(jm1, 0.0), 8e-16 * std::max(std::abs(jm1), amp)};
    double jm2 = amp * std::cos(r);  // J_{-1/2}
    double mu = 0.5;
    double j = jm1;
    while (mu < order.m - 0.25) {
        j = (2.0 * mu / r) * jm1 - jm2;  // forward recurrence, stable for m << r
        jm2 = jm1;
        jm1 = j;
        mu += 1.0;
    }
    return {complexd(j, 0.0), 1e-14 * std::max(std::abs(j), amp)};
}

BesselValue error_kernel_mu(double mu, double r, ErrorKernelSign sign) {
    if (!(r > 0.0)) throw std::invalid_argument("error_kernel: r must be positive");
    if (mu == 0.0) return {complexd(0.0, 0.0), 0.0};
    const complexd c(0.0, sign == ErrorKernelSign::kPlus ? 2.0 : -2.0);
    const complexd c_pow = std::pow(c, mu);
    const double Y = std::max(40.0 / r, 40.0);
    const double U = std::sqrt(Y);
    auto g = [&](double u) -> complexd {
        const double y = u * u;
        return 2.0 * std::exp(-r * y) * std::pow(u, 2.0 * mu + 1.0) * (std::pow(complexd(y, 0.0) + c, mu) - c_pow);
    };
    // panels graded to the e^{-r u^2} scale
    std::vector<double> cuts;
    for (double u = std::min(1.0 / std::sqrt(r), 0.5 * U); u < U; u *= 2.0) cuts.push_back(u);
    QuadratureResult q = integrate_panels(g, 0.0, U, cuts, 0.0, 1e-11);
    // exponential envelope of the dropped tail
    const double bracket_bound = 2.0 * std::pow(Y + 2.0, std::max(mu, 0.0)) + 2.0 * std::pow(2.0, mu);
    const double tail = bracket_bound * std::exp(-r * Y) * std::max(std::pow(Y, mu), 1.0) / r;
    return {q.value, q.abs_error + tail};
}

BesselValue error_kernel(int n, double r, ErrorKernelSign sign) {
    if (n < 2) throw std::invalid_argument("error_kernel: n must be >= 2");
    if (!(r >= 1.0)) throw std::invalid_argument("error_kernel: r must be >= 1 (smaller r uses the series path)");
    return error_kernel_mu(0.5 * (n - 3), r, sign);
}

BesselValue error_kernel_refined(int n, double r, ErrorKernelSign sign) {
    if (n < 2) throw std::invalid_argument("error_kernel: n must be >= 2");
    if (!(r >= 1.0)) throw std::invalid_argument("error_kernel: r must be >= 1");
    const double mu = 0.5 * (n - 3);
    if (mu == 0.0) return {complexd(0.0, 0.0), 0.0};
    const complexd c(0.0, sign == ErrorKernelSign::kPlus ? 2.0 : -2.0);
    const complexd c_pow = std::pow(c, mu);
    const double Y = std::max(40.0 / r, 40.0) * 1.5;
    const double U = std::sqrt(Y);
    auto g = [&](double u) -> complexd {
        const double y = u * u;
        return 2.0 * std::exp(-r * y) * std::pow(u, 2.0 * mu + 1.0) * (std::pow(complexd(y, 0.0) + c, mu) - c_pow);
    };
    std::vector<double> cuts;
    for (double u = std::min(0.5 / std::sqrt(r), 0.25 * U); u < U; u *= 1.5) cuts.push_back(u);
    QuadratureResult q = integrate_panels(g, 0.0, U, cuts, 0.0, 1e-12);
    return {q.value, q.abs_error};
}

complexd bessel_main_term(BesselOrder order, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("bessel_main_term: r must be > 0");
    return complexd(std::sqrt(2.0 / (kPi * r)) * std::sin(r - (2.0 * order.m - 1.0) * kPi / 4.0), 0.0);
}

BesselValue bessel_remainder(BesselOrder order, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("bessel_remainder: r must be > 0");
    const double m = order.m;
    const BesselValue ep = error_kernel_mu(m - 0.5, r, ErrorKernelSign::kPlus);
    const BesselValue em = error_kernel_mu(m - 0.5, r, ErrorKernelSign::kMinus);
    const double pref = std::pow(0.5 * r, m) / (std::tgamma(m + 0.5) * std::sqrt(kPi));
    const complexd val = pref * complexd(0.0, 1.0) *
                         (std::polar(1.0, -r) * ep.value - std::polar(1.0, r) * em.value);
    return {val, pref * (ep.abs_error + em.abs_error) + 4e-16 * std::abs(val)};
}

BesselValue bessel_j_asymptotic(BesselOrder order, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("bessel_j_asymptotic: r must be > 0");
    const complexd main = bessel_main_term(order, r);
    const BesselValue rem = bessel_remainder(order, r);
    return {main + rem.value, rem.abs_error + 4e-16 * std::abs(main)};
}

BesselValue bessel_j(BesselOrder order, double r) {
    if (r < 0.0) throw std::invalid_argument("bessel_j: r must be >= 0");
    if (r < kSeriesSwitch) return bessel_j_series(order, r);
    if (order.is_half_integer()) return bessel_j_half_integer(order, r);
    return bessel_j_asymptotic(order, r);
}

std::vector<std::pair<double, double>> verify_error_bound(int n, std::span<const double> r_grid) {
    if (r_grid.empty()) throw std::invalid_argument("verify_error_bound: empty grid");
    double prev = 0.0;
    for (double r : r_grid) {
        if (!(r >= 1.0)) throw std::invalid_argument("verify_error_bound: grid entries must be >= 1");
        if (!(r > prev)) throw std::invalid_argument("verify_error_bound: grid must be increasing");
        prev = r;
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        const BesselValue e = error_kernel(n, r, ErrorKernelSign::kPlus);
        out.emplace_back(r, std::abs(e.value) * std::pow(r, 0.5 * (n + 1)));
    }
    return out;
}

}  // namespace conelab
