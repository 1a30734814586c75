#include "conelab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace conelab {

const double GaussRule::kNodes[GaussRule::kN] = {
    -0.9815606342467192506906, -0.9041172563704748566785, -0.7699026741943046870369,
    -0.5873179542866174472967, -0.3678314989981801937527, -0.1252334085114689154724,
    0.1252334085114689154724,  0.3678314989981801937527,  0.5873179542866174472967,
    0.7699026741943046870369,  0.9041172563704748566785,  0.9815606342467192506906};
const double GaussRule::kWeights[GaussRule::kN] = {
    0.0471753363865118271946, 0.1069393259953184309603, 0.1600783285433462263347,
    0.2031674267230659217491, 0.2334925365383548087609, 0.2491470458134027850006,
    0.2491470458134027850006, 0.2334925365383548087609, 0.2031674267230659217491,
    0.1600783285433462263347, 0.1069393259953184309603, 0.0471753363865118271946};

QuadratureResult integrate_oscillatory(const RadialProfile& F, double beta, const OscillationSpec& spec) {
    if (!(spec.a > 0.0)) throw std::invalid_argument("integrate_oscillatory: interval must not touch 0");
    if (!(spec.b >= spec.a)) throw std::invalid_argument("integrate_oscillatory: empty interval");
    if (!(std::abs(spec.omega) < 1e9)) throw std::invalid_argument("integrate_oscillatory: |omega| too large");
    if (F.support_lo() < spec.a - 1e-12 || F.support_hi() > spec.b + 1e-12)
        throw std::invalid_argument("integrate_oscillatory: profile support must lie inside the interval");
    if (!std::isfinite(F.sup_abs())) throw std::invalid_argument("integrate_oscillatory: unbounded profile");

    const double lo = std::max(spec.a, F.support_lo());
    const double hi = std::min(spec.b, F.support_hi());
    const double omega = spec.omega;
    auto f = [&](double s) { return F(s) * std::pow(s, beta) * std::polar(1.0, omega * s); };
    const auto breaks = F.breakpoints();
    return integrate_panels(f, lo, hi, breaks, std::abs(omega), 1e-10);
}

std::vector<double> PiecewiseAmplitude::breakpoints() const {
    std::vector<double> out;
    out.reserve(pieces.size() + 1);
    for (const auto& p : pieces) out.push_back(p.lo);
    out.push_back(pieces.back().hi);
    return out;
}

PiecewiseAmplitude profile_amplitude(const RadialProfile& F, double beta) {
    PiecewiseAmplitude amp;
    amp.real_valued = true;
    amp.smooth_cutoff = F.has_smooth_cutoff();
    for (const SmoothPiece& p : F.pieces()) {
        auto f = [p, beta](double s) { return complexd(p.f(s) * std::pow(s, beta), 0.0); };
        auto d1 = [p, beta](double s) {
            return complexd(p.d1(s) * std::pow(s, beta) + p.f(s) * beta * std::pow(s, beta - 1.0), 0.0);
        };
        auto d2 = [p, beta](double s) {
            return complexd(p.d2(s) * std::pow(s, beta) + 2.0 * p.d1(s) * beta * std::pow(s, beta - 1.0) +
                                p.f(s) * beta * (beta - 1.0) * std::pow(s, beta - 2.0),
                            0.0);
        };
        amp.pieces.push_back({p.lo, p.hi, f, d1, d2});
    }
    return amp;
}

PiecewiseAmplitude profile_amplitude_weighted(const RadialProfile& F, double beta,
                                              std::function<complexd(double)> w,
                                              std::function<complexd(double)> dw,
                                              std::function<complexd(double)> d2w) {
    PiecewiseAmplitude amp;
    amp.real_valued = false;
    amp.smooth_cutoff = F.has_smooth_cutoff();
    for (const SmoothPiece& p : F.pieces()) {
        auto base = [p, beta](double s) { return p.f(s) * std::pow(s, beta); };
        auto base1 = [p, beta](double s) {
            return p.d1(s) * std::pow(s, beta) + p.f(s) * beta * std::pow(s, beta - 1.0);
        };
        auto base2 = [p, beta](double s) {
            return p.d2(s) * std::pow(s, beta) + 2.0 * p.d1(s) * beta * std::pow(s, beta - 1.0) +
                   p.f(s) * beta * (beta - 1.0) * std::pow(s, beta - 2.0);
        };
        auto f = [base, w](double s) { return base(s) * w(s); };
        auto d1 = [base, base1, w, dw](double s) { return base1(s) * w(s) + base(s) * dw(s); };
        auto d2 = [base, base1, base2, w, dw, d2w](double s) {
            return base2(s) * w(s) + 2.0 * base1(s) * dw(s) + base(s) * d2w(s);
        };
        amp.pieces.push_back({p.lo, p.hi, f, d1, d2});
    }
    return amp;
}

QuadratureResult oscillatory_transform(const PiecewiseAmplitude& A, double tau, double rel_tol,
                                       double amplitude_bandwidth) {
    auto f = [&A, tau](double s) -> complexd {
        for (const auto& p : A.pieces)
            if (s >= p.lo && s <= p.hi) return p.f(s) * std::polar(1.0, tau * s);
        return {0.0, 0.0};
    };
    // evaluating through the piece lookup is fine: pieces are few
    const auto breaks = A.breakpoints();
    return integrate_panels(f, A.lo(), A.hi(), breaks, std::abs(tau) + amplitude_bandwidth, rel_tol);
}

namespace {

// Rough bound for the L1 norm of A''' over the pieces, via central differences
// of d2.  Zero for polynomial-type amplitudes, where integration by parts is
// exact at three orders.
double third_derivative_l1(const PiecewiseAmplitude& A) {
    double total = 0.0;
    for (const auto& p : A.pieces) {
        const double len = p.hi - p.lo;
        if (!(len > 0.0)) continue;
        const int kSamples = 24;
        const double h = len * 1e-4;
        double acc = 0.0;
        for (int i = 0; i < kSamples; ++i) {
            const double s = p.lo + len * (i + 0.5) / kSamples;
            const complexd d3 = (p.d2(std::min(s + h, p.hi)) - p.d2(std::max(s - h, p.lo))) / (2.0 * h);
            acc += std::abs(d3);
        }
        total += acc * len / kSamples;
    }
    return total;
}

}  // namespace

OscillatoryTailEvaluator OscillatoryTailEvaluator::from_boundary_data(BoundaryData pieces, double c3) {
    OscillatoryTailEvaluator out;
    out.pieces_ = std::move(pieces);
    out.c3_ = c3;
    return out;
}

OscillatoryTailEvaluator::OscillatoryTailEvaluator(const PiecewiseAmplitude& A) {
    c3_ = third_derivative_l1(A);
    zero_ = A.smooth_cutoff;
    if (zero_) return;
    for (const auto& p : A.pieces) {
        Endpoint lo{p.lo, p.f(p.lo), p.d1(p.lo), p.d2(p.lo)};
        Endpoint hi{p.hi, p.f(p.hi), p.d1(p.hi), p.d2(p.hi)};
        pieces_.emplace_back(lo, hi);
    }
}

complexd OscillatoryTailEvaluator::operator()(double tau) const {
    if (std::abs(tau) < 1e-12) throw std::invalid_argument("oscillatory tail: |tau| too small");
    if (zero_) return {0.0, 0.0};
    const complexd itau(0.0, tau);
    complexd total{0.0, 0.0};
    for (const auto& [lo, hi] : pieces_) {
        const complexd phase_hi = std::polar(1.0, tau * hi.s);
        const complexd phase_lo = std::polar(1.0, tau * lo.s);
        complexd inv = 1.0 / itau;
        total += inv * (hi.f * phase_hi - lo.f * phase_lo);
        inv /= itau;
        total -= inv * (hi.d1 * phase_hi - lo.d1 * phase_lo);
        inv /= itau;
        total += inv * (hi.d2 * phase_hi - lo.d2 * phase_lo);
    }
    return total;
}

double OscillatoryTailEvaluator::remainder_bound(double tau) const {
    return c3_ / std::pow(std::max(std::abs(tau), 1e-12), 3);
}

complexd oscillatory_tail(const PiecewiseAmplitude& A, double tau, double* err_out) {
    const OscillatoryTailEvaluator eval(A);
    if (err_out) *err_out = eval.remainder_bound(tau);
    return eval(tau);
}

EnvelopeEvaluator::EnvelopeEvaluator(PiecewiseAmplitude A, double rel_tol, double table_radius)
    : amp_(std::move(A)), rel_tol_(rel_tol), radius_(table_radius) {
    const double lo = amp_.lo(), hi = amp_.hi();
    carrier_ = 0.5 * (lo + hi);
    const double bandwidth = std::max(0.5 * (hi - lo), 1e-9);
    step_ = kPi / (8.0 * bandwidth);
    // symmetric grid about tau = 0, padded so interior 12-point stencils cover
    // the whole advertised radius
    long half = std::max<long>(12, static_cast<long>(std::ceil((radius_ + 6.0 * step_) / step_)));
    const long n = 2 * half + 1;
    tau0_ = -step_ * static_cast<double>(half);
    samples_.resize(static_cast<std::size_t>(n));
    for (long k = 0; k <= half; ++k) {
        const double tau = tau0_ + step_ * static_cast<double>(k);
        samples_[static_cast<std::size_t>(k)] =
            oscillatory_transform(amp_, tau, rel_tol_).value * std::polar(1.0, -carrier_ * tau);
    }
    for (long k = half + 1; k < n; ++k) {
        if (amp_.real_valued) {
            // G(-tau) = conj(G(tau)) for real amplitudes; the demodulated
            // samples inherit plain conjugation on the symmetric grid
            samples_[static_cast<std::size_t>(k)] = std::conj(samples_[static_cast<std::size_t>(2 * half - k)]);
        } else {
            const double tau = tau0_ + step_ * static_cast<double>(k);
            samples_[static_cast<std::size_t>(k)] =
                oscillatory_transform(amp_, tau, rel_tol_).value * std::polar(1.0, -carrier_ * tau);
        }
    }
    tail_ = OscillatoryTailEvaluator(amp_);
}

EnvelopeEvaluator::EnvelopeEvaluator(const EnvelopeEvaluator& like, PiecewiseAmplitude A,
                                     std::vector<complexd> samples, bool with_tails)
    : amp_(std::move(A)),
      rel_tol_(like.rel_tol_),
      radius_(like.radius_),
      carrier_(like.carrier_),
      step_(like.step_),
      tau0_(like.tau0_),
      samples_(std::move(samples)) {
    if (samples_.size() != like.samples_.size())
        throw std::invalid_argument("EnvelopeEvaluator: sample count mismatch");
    if (with_tails) tail_ = OscillatoryTailEvaluator(amp_);
}

EnvelopeEvaluator::EnvelopeEvaluator(const EnvelopeEvaluator& like, std::vector<complexd> samples,
                                     OscillatoryTailEvaluator tail)
    : rel_tol_(like.rel_tol_),
      radius_(like.radius_),
      carrier_(like.carrier_),
      step_(like.step_),
      tau0_(like.tau0_),
      samples_(std::move(samples)) {
    if (samples_.size() != like.samples_.size())
        throw std::invalid_argument("EnvelopeEvaluator: sample count mismatch");
    tail_ = std::move(tail);
}

complexd EnvelopeEvaluator::table_eval(double tau) const {
    // 12-point Lagrange interpolation of the demodulated samples
    const long n = static_cast<long>(samples_.size());
    const double x = (tau - tau0_) / step_;
    long base = static_cast<long>(std::floor(x)) - 5;
    base = std::clamp(base, 0L, n - 12);
    static const double kBary[12] = {1, -11, 55, -165, 330, -462, 462, -330, 165, -55, 11, -1};
    double num_w[12];
    complexd num{0.0, 0.0};
    double den = 0.0;
    for (int j = 0; j < 12; ++j) {
        const double dx = x - static_cast<double>(base + j);
        if (std::abs(dx) < 1e-12) return samples_[static_cast<std::size_t>(base + j)] * std::polar(1.0, carrier_ * tau);
        num_w[j] = kBary[j] / dx;
        den += num_w[j];
    }
    for (int j = 0; j < 12; ++j) num += num_w[j] * samples_[static_cast<std::size_t>(base + j)];
    return (num / den) * std::polar(1.0, carrier_ * tau);
}

complexd EnvelopeEvaluator::operator()(double tau) const {
    if (std::abs(tau) <= radius_) return table_eval(tau);
    return tail_(tau);
}

complexd EnvelopeEvaluator::quad_eval(double tau) const { return oscillatory_transform(amp_, tau, rel_tol_).value; }

// --- Chebyshev proxy ---------------------------------------------------------

ChebyshevProxy ChebyshevProxy::build(const std::function<complexd(double)>& fn, double lo, double hi, int n,
                                     bool log_x) {
    if (!(hi > lo) || n < 4) throw std::invalid_argument("ChebyshevProxy: bad interval or order");
    ChebyshevProxy p;
    p.lo_ = lo;
    p.hi_ = hi;
    p.log_ = log_x;
    if (log_x && !(lo > 0.0)) throw std::invalid_argument("ChebyshevProxy: log mapping needs lo > 0");
    const double u0 = log_x ? std::log(lo) : lo;
    const double u1 = log_x ? std::log(hi) : hi;
    std::vector<complexd> vals(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        const double xi = std::cos(kPi * j / n);
        const double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * xi;
        vals[static_cast<std::size_t>(j)] = fn(log_x ? std::exp(u) : u);
    }
    p.coef_.assign(static_cast<std::size_t>(n) + 1, complexd{});
    for (int k = 0; k <= n; ++k) {
        complexd acc{0.0, 0.0};
        for (int j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            acc += w * vals[static_cast<std::size_t>(j)] * std::cos(kPi * k * j / n);
        }
        acc *= 2.0 / n;
        if (k == 0 || k == n) acc *= 0.5;
        p.coef_[static_cast<std::size_t>(k)] = acc;
    }
    // derivative coefficients w.r.t. the mapped variable u:
    // d_k = d_{k+2} + 2(k+1) c_{k+1}, downward, then halve d_0
    const int m = n;
    auto differentiate = [m](const std::vector<complexd>& c) {
        std::vector<complexd> d(static_cast<std::size_t>(m) + 1, complexd{});
        for (int k = m - 1; k >= 0; --k) {
            const complexd dk2 = (k + 2 <= m) ? d[static_cast<std::size_t>(k + 2)] : complexd{};
            d[static_cast<std::size_t>(k)] = dk2 + 2.0 * (k + 1.0) * c[static_cast<std::size_t>(k + 1)];
        }
        d[0] *= 0.5;
        return d;
    };
    const double du_scale = 2.0 / (u1 - u0);
    p.dcoef_ = differentiate(p.coef_);
    for (auto& c : p.dcoef_) c *= du_scale;
    p.d2coef_ = differentiate(p.dcoef_);
    for (auto& c : p.d2coef_) c *= du_scale;
    return p;
}

complexd ChebyshevProxy::clenshaw(const std::vector<complexd>& coef, double xi) const {
    complexd b1{0.0, 0.0}, b2{0.0, 0.0};
    for (std::size_t k = coef.size(); k-- > 1;) {
        const complexd b0 = coef[k] + 2.0 * xi * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coef[0] + xi * b1 - b2;
}

namespace {
double mapped_coordinate(double x, double lo, double hi, bool log_x) {
    const double u0 = log_x ? std::log(lo) : lo;
    const double u1 = log_x ? std::log(hi) : hi;
    const double u = log_x ? std::log(x) : x;
    return std::clamp((2.0 * u - u0 - u1) / (u1 - u0), -1.0, 1.0);
}
}  // namespace

complexd ChebyshevProxy::eval(double x) const { return clenshaw(coef_, mapped_coordinate(x, lo_, hi_, log_)); }

complexd ChebyshevProxy::deriv(double x) const {
    complexd df_du = clenshaw(dcoef_, mapped_coordinate(x, lo_, hi_, log_));
    if (log_) df_du /= x;  // d/dx = (1/x) d/du with u = log x
    return df_du;
}

complexd ChebyshevProxy::deriv2(double x) const {
    const double xi = mapped_coordinate(x, lo_, hi_, log_);
    if (!log_) return clenshaw(d2coef_, xi);
    const complexd f_u = clenshaw(dcoef_, xi);
    const complexd f_uu = clenshaw(d2coef_, xi);
    return (f_uu - f_u) / (x * x);
}

// --- adaptive time-domain truncation ----------------------------------------

namespace {

std::vector<TimeWindow> merged_windows(std::span<const double> centers, double half_width) {
    std::vector<TimeWindow> ws;
    std::vector<double> cs(centers.begin(), centers.end());
    std::sort(cs.begin(), cs.end());
    for (double c : cs) {
        if (!ws.empty() && c - half_width <= ws.back().hi()) {
            const double lo = ws.back().lo();
            const double hi = c + half_width;
            ws.back() = {0.5 * (lo + hi), 0.5 * (hi - lo)};
        } else {
            ws.push_back({c, half_width});
        }
    }
    return ws;
}

}  // namespace

TimeTruncation adaptive_time_truncation(const std::function<complexd(double)>& g, double q,
                                        std::span<const double> centers, double rel_tol,
                                        double initial_half_width, double carrier_top) {
    if (!(q > 1.0)) throw std::invalid_argument("adaptive_time_truncation: need q > 1");
    if (centers.empty()) throw std::invalid_argument("adaptive_time_truncation: need at least one center");
    if (!(initial_half_width > 0.0)) throw std::invalid_argument("adaptive_time_truncation: bad initial width");

    auto dist_to_centers = [&](double t) {
        double d = std::abs(t - centers[0]);
        for (double c : centers) d = std::min(d, std::abs(t - c));
        return d;
    };
    auto mass_over = [&](const std::vector<TimeWindow>& ws) {
        double total = 0.0;
        for (const auto& w : ws) {
            auto f = [&](double t) { return complexd(std::pow(std::abs(g(t)), q), 0.0); };
            total += integrate_panels(f, w.lo(), w.hi(), {}, std::max(2.0, q) * std::max(carrier_top, 1e-6) / 2.0,
                                      1e-7)
                         .value.real();
        }
        return total;
    };

    double T = initial_half_width;
    double prev_captured = -1.0;
    TimeTruncation out;
    for (int iter = 0; iter <= 4; ++iter) {
        out.windows = merged_windows(centers, T);
        out.per_center_half_width = T;
        out.captured = mass_over(out.windows);

        double v_hat = 0.0;
        for (const auto& w : out.windows) {
            for (double edge : {w.lo(), w.hi()}) {
                const double dir = edge == w.lo() ? -1.0 : 1.0;
                for (double fr : {0.0, 0.1, 0.25, 0.45, 0.7, 1.0}) {
                    const double t = edge + dir * fr * std::max(1.0, 0.25 * T);
                    bool inside = false;
                    for (const auto& w2 : out.windows) inside = inside || (t >= w2.lo() && t <= w2.hi());
                    if (inside && fr > 0.0) continue;
                    v_hat = std::max(v_hat, std::abs(g(t)) * dist_to_centers(t));
                }
            }
        }
        v_hat *= 1.5;  // probe safety margin

        out.tail_bound = 0.0;
        for (const auto& w : out.windows) {
            for (double edge : {w.lo(), w.hi()}) {
                const double d = std::max(dist_to_centers(edge), 1e-9);
                out.tail_bound += std::pow(v_hat, q) * std::pow(d, 1.0 - q) / (q - 1.0);
            }
        }

        const bool tail_ok = out.tail_bound <= rel_tol * std::max(out.captured, 1e-300);
        const bool stable = prev_captured < 0.0 ||
                            std::abs(out.captured - prev_captured) <= rel_tol * std::max(out.captured, 1e-300);
        if (tail_ok && (stable || out.captured == 0.0)) {
            out.converged = true;
            return out;
        }
        prev_captured = out.captured;
        T *= 2.0;
    }
    out.converged = false;
    return out;
}

}  // namespace conelab
