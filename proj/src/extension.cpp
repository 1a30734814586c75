#include "conelab/extension.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace conelab {

namespace {

void check_point(const SpacetimePoint& pt) {
    if (pt.n < 2) throw std::invalid_argument("SpacetimePoint: n must be >= 2");
    if (!(pt.r >= 0.0)) throw std::invalid_argument("SpacetimePoint: r must be >= 0");
    if (!std::isfinite(pt.t)) throw std::invalid_argument("SpacetimePoint: t must be finite");
}

// jt_m(rho) over [0, rho_max]: ascending series below the switch point, main
// term plus proxied remainder above.
class ScaledBessel {
  public:
    ScaledBessel(int n, double rho_max) : m_(0.5 * (n - 2)) {
        if (rho_max >= kSwitch) {
            proxy_ = std::make_unique<ChebyshevProxy>(ChebyshevProxy::build(
                [n](double rho) { return error_kernel_mu(0.5 * (n - 3), rho, ErrorKernelSign::kPlus).value; },
                kSwitch * 0.98, rho_max * 1.02, 56, /*log_x=*/true));
            pref_scale_ = 1.0 / (std::tgamma(m_ + 0.5) * std::sqrt(kPi));
        }
    }

    double operator()(double rho) const {
        if (rho < kSwitch) return bessel_j_scaled(m_, rho);
        const double main = std::sqrt(2.0 / (kPi * rho)) * std::sin(rho - (2.0 * m_ - 1.0) * kPi / 4.0);
        const complexd ep = proxy_->eval(rho);
        // i (e^{-i rho} E_+ - e^{i rho} conj(E_+)) = 2 Im(e^{-i rho} E_+) ... times i
        const double rem = std::pow(0.5 * rho, m_) * pref_scale_ * (-2.0) * std::imag(std::polar(1.0, -rho) * ep);
        return (main + rem) / std::pow(rho, m_);
    }

  private:
    static constexpr double kSwitch = 12.0;
    double m_;
    double pref_scale_ = 0.0;
    std::unique_ptr<ChebyshevProxy> proxy_;
};

}  // namespace

DecompositionConstants decomposition_constants(int n) {
    if (n < 2) throw std::invalid_argument("decomposition_constants: n must be >= 2");
    DecompositionConstants k;
    k.n = n;
    k.c_n = std::pow(2.0 * kPi, 0.5 * n);
    k.m = 0.5 * (n - 2);
    k.gamma = 0.5 * (n - 3);
    k.theta = (n - 3) * kPi / 4.0;
    const complexd inv_2i = complexd(0.0, -0.5);  // 1/(2i)
    const double amp = k.c_n * std::sqrt(2.0 / kPi);
    k.a_plus = amp * std::polar(1.0, -k.theta) * inv_2i;
    k.a_minus = -amp * std::polar(1.0, k.theta) * inv_2i;
    k.k_err = complexd(0.0, 1.0) * k.c_n * std::pow(2.0, -k.m) / (std::tgamma(0.5 * (n - 1)) * std::sqrt(kPi));
    return k;
}

ExtensionValue extension_direct(const RadialProfile& F, const SpacetimePoint& pt) {
    check_point(pt);
    const int n = pt.n;
    const double c_n = std::pow(2.0 * kPi, 0.5 * n);
    const double a = F.support_lo(), b = F.support_hi();
    ScaledBessel jt(n, pt.r * b);
    auto f = [&](double s) { return complexd(F(s) * std::pow(s, n - 2.0) * jt(pt.r * s), 0.0) * std::polar(1.0, pt.t * s); };
    const auto breaks = F.breakpoints();
    QuadratureResult q = integrate_panels(f, a, b, breaks, std::abs(pt.t) + pt.r, 1e-10);
    return {c_n * q.value, c_n * q.abs_error + 1e-12 * std::abs(c_n * q.value)};
}

ExtensionValue main_term(const RadialProfile& F, const SpacetimePoint& pt) {
    check_point(pt);
    if (!(pt.r >= 1.0)) throw std::invalid_argument("main_term: decomposition is offered only for r >= 1");
    const DecompositionConstants k = decomposition_constants(pt.n);
    const OscillationSpec plus{pt.t + pt.r, F.support_lo(), F.support_hi()};
    const OscillationSpec minus{pt.t - pt.r, F.support_lo(), F.support_hi()};
    const QuadratureResult gp = integrate_oscillatory(F, k.gamma, plus);
    const QuadratureResult gm = integrate_oscillatory(F, k.gamma, minus);
    const double w = std::pow(pt.r, -0.5 * (pt.n - 1));
    const complexd value = w * (k.a_plus * gp.value + k.a_minus * gm.value);
    const double err = w * (std::abs(k.a_plus) * gp.abs_error + std::abs(k.a_minus) * gm.abs_error);
    return {value, err + 4e-16 * std::abs(value)};
}

ExtensionValue error_term(const RadialProfile& F, const SpacetimePoint& pt) {
    check_point(pt);
    if (!(pt.r >= 1.0)) throw std::invalid_argument("error_term: decomposition is offered only for r >= 1");
    if (pt.n == 3) return {complexd(0.0, 0.0), 0.0};
    const DecompositionConstants k = decomposition_constants(pt.n);
    const double a = F.support_lo(), b = F.support_hi();
    const ChebyshevProxy eplus = build_error_kernel_proxy(pt.n, pt.r * a, pt.r * b);
    const PiecewiseAmplitude amp = error_term_amplitude(F, pt.n, pt.r, eplus);
    // H_+ at tau = t - r; H_- (tau) = conj(H_+(-tau)) since E_- = conj(E_+)
    const QuadratureResult hp = oscillatory_transform(amp, pt.t - pt.r, 1e-10);
    const QuadratureResult hm_conj = oscillatory_transform(amp, -(pt.t + pt.r), 1e-10);
    const complexd value = k.k_err * (hp.value - std::conj(hm_conj.value));
    const double err = std::abs(k.k_err) * (hp.abs_error + hm_conj.abs_error);
    return {value, err + 4e-16 * std::abs(value)};
}

ChebyshevProxy build_error_kernel_proxy(int n, double rho_lo, double rho_hi, int order) {
    if (!(rho_lo > 0.0) || !(rho_hi > rho_lo))
        throw std::invalid_argument("build_error_kernel_proxy: bad interval");
    return ChebyshevProxy::build(
        [n](double rho) { return error_kernel_mu(0.5 * (n - 3), rho, ErrorKernelSign::kPlus).value; },
        rho_lo * 0.999, rho_hi * 1.001, order, /*log_x=*/true);
}

PiecewiseAmplitude main_term_amplitude(const RadialProfile& F, int n) {
    return profile_amplitude(F, 0.5 * (n - 3));
}

PiecewiseAmplitude error_term_amplitude(const RadialProfile& F, int n, double r, const ChebyshevProxy& eplus) {
    auto w = [&eplus, r](double s) { return eplus.eval(r * s); };
    auto dw = [&eplus, r](double s) { return r * eplus.deriv(r * s); };
    auto d2w = [&eplus, r](double s) { return r * r * eplus.deriv2(r * s); };
    return profile_amplitude_weighted(F, static_cast<double>(n - 2), w, dw, d2w);
}

PiecewiseAmplitude direct_amplitude(const RadialProfile& F, int n, double r) {
    const double m = 0.5 * (n - 2);
    const double c_n = std::pow(2.0 * kPi, 0.5 * n);
    auto w = [m, r, c_n](double s) { return complexd(c_n * bessel_j_scaled(m, r * s), 0.0); };
    auto dw = [m, r, c_n](double s) { return complexd(c_n * r * bessel_j_scaled_d1(m, r * s), 0.0); };
    auto d2w = [m, r, c_n](double s) { return complexd(c_n * r * r * bessel_j_scaled_d2(m, r * s), 0.0); };
    PiecewiseAmplitude amp = profile_amplitude_weighted(F, static_cast<double>(n - 2), w, dw, d2w);
    amp.real_valued = true;
    return amp;
}

}  // namespace conelab
