#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "conelab/profile.hpp"
#include "conelab/types.hpp"

namespace conelab {

struct QuadratureResult {
    complexd value{0.0, 0.0};
    double abs_error = 0.0;
};

// 12-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    static constexpr int kN = 12;
    static const double kNodes[kN];
    static const double kWeights[kN];
};

namespace detail {

struct PanelEval {
    complexd value{0.0, 0.0};
    double l1 = 0.0;  // integral of |f| by the same rule, for the rounding floor
};

template <class F>
PanelEval gauss_panel(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    PanelEval out;
    for (int i = 0; i < GaussRule::kN; ++i) {
        const complexd y = f(mid + half * GaussRule::kNodes[i]);
        out.value += GaussRule::kWeights[i] * y;
        out.l1 += GaussRule::kWeights[i] * std::abs(y);
    }
    out.value *= half;
    out.l1 *= half;
    return out;
}

template <class F>
complexd refine_panel(F&& f, double a, double b, double tol, double parent_err, int depth, double& err_acc,
                      long& evals) {
    const double mid = 0.5 * (a + b);
    const PanelEval coarse = gauss_panel(f, a, b);
    const PanelEval lo = gauss_panel(f, a, mid);
    const PanelEval hi = gauss_panel(f, mid, b);
    const complexd fine = lo.value + hi.value;
    const double err = std::abs(fine - coarse.value);
    evals += 3 * GaussRule::kN;
    // Discretization error of the nested rule falls by ~2^25 per bisection
    // while evaluation noise merely halves with the panel mass.  A child error
    // that fails to drop well below its parent's marks the noise plateau;
    // splitting further only burns evaluations.
    const bool plateau = depth >= 2 && err > 0.3 * parent_err;
    const double floor = 1e-14 * (lo.l1 + hi.l1);
    if (err <= tol || err <= floor || plateau || depth >= 20 || evals > 20'000'000) {
        err_acc += err;
        return fine;
    }
    return refine_panel(f, a, mid, 0.5 * tol, err, depth + 1, err_acc, evals) +
           refine_panel(f, mid, b, 0.5 * tol, err, depth + 1, err_acc, evals);
}

}  // namespace detail

// Composite adaptive Gauss quadrature of f over [a, b].  Segments are split at
// the interior breakpoints, then into panels no wider than a quarter period
// pi/(2*bandwidth) of the fastest oscillation, then bisected until the nested
// (half-width) error estimate meets the tolerance.
template <class F>
QuadratureResult integrate_panels(F&& f, double a, double b, std::span<const double> interior_breaks,
                                  double bandwidth, double rel_tol, double abs_floor = 0.0) {
    if (!(b > a)) return {};
    std::vector<double> cuts{a};
    for (double c : interior_breaks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    const double total_len = b - a;
    const double panel_w = bandwidth > 0.0 ? kPi / (2.0 * bandwidth) : total_len;

    struct Panel {
        double a, b;
        detail::PanelEval coarse;
    };
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1], len = hi - lo;
        if (!(len > 0.0)) continue;
        const long np = std::max<long>(1, static_cast<long>(std::ceil(len / std::min(panel_w, 0.5 * total_len))));
        for (long k = 0; k < np; ++k) {
            const double pa = lo + len * static_cast<double>(k) / static_cast<double>(np);
            const double pb = lo + len * static_cast<double>(k + 1) / static_cast<double>(np);
            panels.push_back({pa, pb, detail::gauss_panel(f, pa, pb)});
        }
    }

    complexd rough{0.0, 0.0};
    double l1 = 0.0;
    for (const Panel& p : panels) {
        rough += p.coarse.value;
        l1 += p.coarse.l1;
    }
    const double tol_abs = std::max({rel_tol * std::abs(rough), rel_tol * 1e-3 * l1, abs_floor, 1e-305});

    QuadratureResult out;
    long evals = 0;
    for (const Panel& p : panels)
        out.value += detail::refine_panel(f, p.a, p.b, tol_abs * (p.b - p.a) / total_len,
                                          std::numeric_limits<double>::infinity(), 0, out.abs_error, evals);
    return out;
}

// Phase data of a one-dimensional oscillatory integral over [a, b] with
// 0 < a <= b: the combined frequency omega of e^{i omega s}.
struct OscillationSpec {
    double omega = 0.0;
    double a = 0.0;
    double b = 0.0;
};

// int F(s) s^beta e^{i omega s} ds over the support of F (which must lie in
// [spec.a, spec.b]).  Panels are aligned to profile breakpoints.
QuadratureResult integrate_oscillatory(const RadialProfile& F, double beta, const OscillationSpec& spec);

// --- piecewise-smooth complex amplitudes -----------------------------------

struct AmplitudePiece {
    double lo = 0.0;
    double hi = 0.0;
    std::function<complexd(double)> f;
    std::function<complexd(double)> d1;
    std::function<complexd(double)> d2;
};

struct PiecewiseAmplitude {
    std::vector<AmplitudePiece> pieces;
    bool real_valued = false;
    bool smooth_cutoff = false;  // boundary data of all orders vanish (bump-type)

    double lo() const { return pieces.front().lo; }
    double hi() const { return pieces.back().hi; }
    std::vector<double> breakpoints() const;
};

// A(s) = F(s) * s^beta.
PiecewiseAmplitude profile_amplitude(const RadialProfile& F, double beta);
// A(s) = F(s) * s^beta * w(s) for a smooth complex weight.
PiecewiseAmplitude profile_amplitude_weighted(const RadialProfile& F, double beta,
                                              std::function<complexd(double)> w,
                                              std::function<complexd(double)> dw,
                                              std::function<complexd(double)> d2w);

// G(tau) = int A(s) e^{i tau s} ds by quadrature.
QuadratureResult oscillatory_transform(const PiecewiseAmplitude& A, double tau, double rel_tol,
                                       double amplitude_bandwidth = 0.0);

// Large-|tau| evaluation of G(tau) by repeated integration by parts (three
// orders, endpoint/kink data only), with cached boundary data.
class OscillatoryTailEvaluator {
  public:
    struct Endpoint {
        double s = 0.0;
        complexd f, d1, d2;
    };
    using BoundaryData = std::vector<std::pair<Endpoint, Endpoint>>;

    OscillatoryTailEvaluator() = default;
    explicit OscillatoryTailEvaluator(const PiecewiseAmplitude& A);
    static OscillatoryTailEvaluator from_boundary_data(BoundaryData pieces, double c3);

    complexd operator()(double tau) const;
    // bound on the dropped remainder, ||A'''||_1 / |tau|^3
    double remainder_bound(double tau) const;
    const BoundaryData& boundary_data() const { return pieces_; }
    double c3() const { return c3_; }

  private:
    BoundaryData pieces_;
    double c3_ = 0.0;
    bool zero_ = false;
};

// Convenience wrapper (tests); builds the evaluator per call.
complexd oscillatory_tail(const PiecewiseAmplitude& A, double tau, double* err_out = nullptr);

// Hybrid evaluator of G(tau): uniform demodulated table with local Lagrange
// interpolation on |tau| <= radius, integration-by-parts asymptotics beyond.
class EnvelopeEvaluator {
  public:
    EnvelopeEvaluator(PiecewiseAmplitude A, double rel_tol, double table_radius = 96.0);
    // same grid as `like`, with externally supplied demodulated samples; pass
    // with_tails = false when lookups never leave the table radius
    EnvelopeEvaluator(const EnvelopeEvaluator& like, PiecewiseAmplitude A, std::vector<complexd> samples,
                      bool with_tails = true);
    // same grid as `like`, with an externally blended tail evaluator
    EnvelopeEvaluator(const EnvelopeEvaluator& like, std::vector<complexd> samples,
                      OscillatoryTailEvaluator tail);

    complexd operator()(double tau) const;
    complexd quad_eval(double tau) const;
    double table_radius() const { return radius_; }
    const std::vector<complexd>& samples() const { return samples_; }
    const OscillatoryTailEvaluator& tail() const { return tail_; }

  private:
    complexd table_eval(double tau) const;

    PiecewiseAmplitude amp_;
    OscillatoryTailEvaluator tail_;
    double rel_tol_;
    double radius_;
    double carrier_ = 0.0;
    double step_ = 1.0;
    double tau0_ = 0.0;
    std::vector<complexd> samples_;  // demodulated G on the uniform grid
};

// --- Chebyshev proxy ---------------------------------------------------------

// Chebyshev interpolant of a smooth complex function on [lo, hi], optionally in
// log(x).  Used to cache slowly varying kernels inside hot quadrature loops.
class ChebyshevProxy {
  public:
    static ChebyshevProxy build(const std::function<complexd(double)>& fn, double lo, double hi, int n,
                                bool log_x = false);

    complexd eval(double x) const;
    complexd deriv(double x) const;
    complexd deriv2(double x) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }

  private:
    complexd clenshaw(const std::vector<complexd>& coef, double xi) const;

    std::vector<complexd> coef_;
    std::vector<complexd> dcoef_;
    std::vector<complexd> d2coef_;
    double lo_ = 0.0, hi_ = 1.0;
    bool log_ = false;
};

// --- adaptive time-domain truncation ----------------------------------------

struct TimeWindow {
    double center = 0.0;
    double half_width = 0.0;
    double lo() const { return center - half_width; }
    double hi() const { return center + half_width; }
};

struct TimeTruncation {
    std::vector<TimeWindow> windows;      // sorted, pairwise disjoint (merged)
    double per_center_half_width = 0.0;   // half width before merging
    double captured = 0.0;                // int over windows of |g|^q
    double tail_bound = 0.0;              // bound on the omitted mass
    bool converged = true;
};

// Chooses windows around the given centers so the omitted integral of |g|^q is
// at most rel_tol times the captured one.  g must decay like |t - c|^{-1} away
// from each center; the tail is bounded by the fitted envelope
// int_{|t-c|>T} (V/|t-c|)^q dt = 2 V^q T^{1-q}/(q-1).
TimeTruncation adaptive_time_truncation(const std::function<complexd(double)>& g, double q,
                                        std::span<const double> centers, double rel_tol,
                                        double initial_half_width, double carrier_top);

}  // namespace conelab
