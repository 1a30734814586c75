#include "conelab/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace conelab {

std::string to_string(ExtensionTerm term) {
    switch (term) {
        case ExtensionTerm::kFull: return "full";
        case ExtensionTerm::kMain: return "main";
        case ExtensionTerm::kError: return "error";
    }
    return "unknown";
}

// ===========================================================================
// annulus-norm engine
// ===========================================================================

namespace {

constexpr int kChebR = 12;  // Chebyshev nodes in log r per annulus

// Everything needed to evaluate one band's contribution at a fixed r.
struct BandAtR {
    bool decomposition = false;
    bool with_main = true;
    bool with_error = true;
    DecompositionConstants consts;
    double r_weight = 0.0;  // r^{-(n-1)/2}
    const EnvelopeEvaluator* g = nullptr;
    std::optional<EnvelopeEvaluator> h;  // collapsed H_+ at this r
    std::optional<EnvelopeEvaluator> direct;

    complexd eval(double t, double r) const {
        if (!decomposition) return (*direct)(t);
        complexd u{0.0, 0.0};
        if (with_main && g) u = r_weight * (consts.a_plus * (*g)(t + r) + consts.a_minus * (*g)(t - r));
        if (with_error && h) u += consts.k_err * ((*h)(t - r) - std::conj((*h)(-(t + r))));
        return u;
    }
};

// Per-band immutable data for one annulus.
struct BandPlan {
    const RadialProfile* profile = nullptr;
    int n = 2;
    bool decomposition = false;
    bool with_main = true;
    bool with_error = true;
    DecompositionConstants consts;
    std::optional<EnvelopeEvaluator> g;
    std::optional<ChebyshevProxy> eproxy;
    // H_+ (decomposition route) or the full polar evaluator (direct route),
    // tabulated at Chebyshev nodes in log r and blended per radius
    std::vector<EnvelopeEvaluator> node_tables;
    std::vector<double> cheb_xi;  // node positions in [-1, 1]
    double log_r_lo = 0.0, log_r_hi = 0.0;
    double table_radius = 96.0;
    double quad_tol = 1e-6;
    std::optional<EnvelopeEvaluator> probe;  // direct evaluator at r_bar, phase 1 only

    // barycentric Chebyshev weights at log r; an exact node hit puts 1 there
    std::array<double, kChebR> collapse_weights(double r) const {
        std::array<double, kChebR> w{};
        const double xi =
            std::clamp((2.0 * std::log(r) - log_r_lo - log_r_hi) / (log_r_hi - log_r_lo), -1.0, 1.0);
        double wsum = 0.0;
        for (int j = 0; j < kChebR; ++j) {
            const double d = xi - cheb_xi[static_cast<std::size_t>(j)];
            if (std::abs(d) < 1e-14) {
                w.fill(0.0);
                w[static_cast<std::size_t>(j)] = 1.0;
                return w;
            }
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            const double scale = (j == 0 || j == kChebR - 1) ? 0.5 : 1.0;
            w[static_cast<std::size_t>(j)] = sign * scale / d;
            wsum += w[static_cast<std::size_t>(j)];
        }
        for (auto& x : w) x /= wsum;
        return w;
    }

    std::vector<complexd> collapse_samples(const std::array<double, kChebR>& w) const {
        const std::size_t ns = node_tables.front().samples().size();
        std::vector<complexd> collapsed(ns, complexd{0.0, 0.0});
        for (int j = 0; j < kChebR; ++j) {
            const double c = w[static_cast<std::size_t>(j)];
            if (c == 0.0) continue;
            const auto& src = node_tables[static_cast<std::size_t>(j)].samples();
            for (std::size_t k = 0; k < ns; ++k) collapsed[k] += c * src[k];
        }
        return collapsed;
    }

    OscillatoryTailEvaluator collapse_tail(const std::array<double, kChebR>& w) const {
        OscillatoryTailEvaluator::BoundaryData data = node_tables.front().tail().boundary_data();
        for (auto& piece : data) {
            piece.first.f = piece.first.d1 = piece.first.d2 = complexd{0.0, 0.0};
            piece.second.f = piece.second.d1 = piece.second.d2 = complexd{0.0, 0.0};
        }
        double c3 = 0.0;
        for (int j = 0; j < kChebR; ++j) {
            const double c = w[static_cast<std::size_t>(j)];
            if (c == 0.0) continue;
            const auto& src = node_tables[static_cast<std::size_t>(j)].tail();
            c3 += c * src.c3();
            for (std::size_t k = 0; k < data.size(); ++k) {
                data[k].first.f += c * src.boundary_data()[k].first.f;
                data[k].first.d1 += c * src.boundary_data()[k].first.d1;
                data[k].first.d2 += c * src.boundary_data()[k].first.d2;
                data[k].second.f += c * src.boundary_data()[k].second.f;
                data[k].second.d1 += c * src.boundary_data()[k].second.d1;
                data[k].second.d2 += c * src.boundary_data()[k].second.d2;
            }
        }
        return OscillatoryTailEvaluator::from_boundary_data(std::move(data), std::abs(c3));
    }

    double cheb_node_r(int j) const {
        const double lx =
            0.5 * (log_r_lo + log_r_hi) + 0.5 * (log_r_hi - log_r_lo) * cheb_xi[static_cast<std::size_t>(j)];
        return std::exp(lx);
    }

    BandAtR at(double r) const {
        BandAtR out;
        out.decomposition = decomposition;
        out.with_main = with_main;
        out.with_error = with_error;
        out.consts = consts;
        out.r_weight = std::pow(r, -0.5 * (n - 1));
        out.g = g ? &*g : nullptr;
        if (decomposition && !node_tables.empty()) {
            const auto w = collapse_weights(r);
            out.h.emplace(node_tables.front(), collapse_samples(w), collapse_tail(w));
        }
        if (!decomposition) {
            if (!node_tables.empty()) {
                const auto w = collapse_weights(r);
                out.direct.emplace(node_tables.front(), PiecewiseAmplitude{}, collapse_samples(w),
                                   /*with_tails=*/false);
            } else {
                out.direct = *probe;  // phase 1 (window probing at r_bar)
            }
        }
        return out;
    }
};

struct EnginePlan {
    std::vector<BandPlan> bands;
    double q = 2.0;
    int n = 2;
    double r_lo = 0.0, r_hi = 0.0;
    double carrier_top = 0.0;   // max over bands of support_hi
    double env_spread = 0.0;    // max_b - min_a across bands
    double t_half_width = 0.0;  // window half width (per center)
    TimeTruncation truncation;

    complexd eval_sum(const std::vector<BandAtR>& at, double t, double r) const {
        complexd u{0.0, 0.0};
        for (const auto& b : at) u += b.eval(t, r);
        return u;
    }
};

std::vector<TimeWindow> windows_at(double r, double half_width) {
    std::vector<TimeWindow> ws;
    if (r <= half_width) {
        ws.push_back({0.0, r + half_width});
    } else {
        ws.push_back({-r, half_width});
        ws.push_back({r, half_width});
    }
    return ws;
}

// |u|^q integrated over the window set at fixed r (plain panel rule: the panel
// width already resolves the envelope bandwidth).
double time_mass(const EnginePlan& plan, const std::vector<BandAtR>& at, double r, double panel_w) {
    double total = 0.0;
    for (const TimeWindow& w : windows_at(r, plan.t_half_width)) {
        const long np = std::max<long>(2, static_cast<long>(std::ceil(2.0 * w.half_width / panel_w)));
        const double len = 2.0 * w.half_width / static_cast<double>(np);
        for (long k = 0; k < np; ++k) {
            const double mid = w.lo() + len * (static_cast<double>(k) + 0.5), half = 0.5 * len;
            double acc = 0.0;
            for (int i = 0; i < GaussRule::kN; ++i) {
                const double t = mid + half * GaussRule::kNodes[i];
                acc += GaussRule::kWeights[i] * std::pow(std::norm(plan.eval_sum(at, t, r)), 0.5 * plan.q);
            }
            total += half * acc;
        }
    }
    return total;
}

// int_{r_lo}^{r_hi} r^{n-1} (time mass) dr with the given panel widths.
double radial_integral(const EnginePlan& plan, double w_r, double w_t) {
    const double len_total = plan.r_hi - plan.r_lo;
    const long np = std::max<long>(2, static_cast<long>(std::ceil(len_total / w_r)));
    const double len = len_total / static_cast<double>(np);
    double total = 0.0;
    for (long k = 0; k < np; ++k) {
        const double mid = plan.r_lo + len * (static_cast<double>(k) + 0.5), half = 0.5 * len;
        for (int i = 0; i < GaussRule::kN; ++i) {
            const double r = mid + half * GaussRule::kNodes[i];
            std::vector<BandAtR> at;
            at.reserve(plan.bands.size());
            for (const auto& b : plan.bands) at.push_back(b.at(r));
            total += half * GaussRule::kWeights[i] * std::pow(r, plan.n - 1.0) * time_mass(plan, at, r, w_t);
        }
    }
    return total;
}

EnginePlan build_plan(std::span<const RadialProfile> bands, double q, const AnnulusRegion& region,
                      ExtensionTerm term, const NormOptions& opt) {
    if (bands.empty()) throw std::invalid_argument("extension_annulus_norm: need at least one band");
    if (!(q >= 1.0)) throw std::invalid_argument("extension_annulus_norm: need q >= 1");

    EnginePlan plan;
    plan.q = q;
    plan.n = region.n;
    plan.r_lo = region.r_lo();
    plan.r_hi = region.r_hi();

    double min_a = bands[0].support_lo(), max_b = bands[0].support_hi(), min_width = 1e300;
    for (const auto& f : bands) {
        min_a = std::min(min_a, f.support_lo());
        max_b = std::max(max_b, f.support_hi());
        min_width = std::min(min_width, f.support_hi() - f.support_lo());
    }
    plan.carrier_top = max_b;
    plan.env_spread = max_b - min_a;

    const double t0 = opt.initial_window > 0.0 ? opt.initial_window : 8.0 / min_width;

    const double r_bar = std::sqrt(plan.r_lo * plan.r_hi);
    for (const auto& f : bands) {
        BandPlan bp;
        bp.profile = &f;
        bp.n = region.n;
        bp.consts = decomposition_constants(region.n);
        bp.decomposition = plan.r_lo * f.support_lo() >= 1.0;
        bp.with_main = term != ExtensionTerm::kError;
        bp.with_error = term != ExtensionTerm::kMain;
        bp.quad_tol = opt.quad_rel_tol;
        bp.log_r_lo = std::log(plan.r_lo);
        bp.log_r_hi = std::log(plan.r_hi);
        bp.cheb_xi.resize(kChebR);
        for (int j = 0; j < kChebR; ++j)
            bp.cheb_xi[static_cast<std::size_t>(j)] = std::cos(kPi * j / (kChebR - 1));
        if (!bp.decomposition && term != ExtensionTerm::kFull)
            throw std::invalid_argument(
                "extension_annulus_norm: main/error terms require r * support_lo >= 1 on the annulus");
        if (bp.decomposition) {
            bp.table_radius = opt.table_radius / f.dyadic_level();
            if (bp.with_main) bp.g.emplace(main_term_amplitude(f, region.n), opt.quad_rel_tol, bp.table_radius);
            if (bp.with_error && region.n != 3) {
                bp.eproxy =
                    build_error_kernel_proxy(region.n, plan.r_lo * f.support_lo(), plan.r_hi * f.support_hi());
                for (int j = 0; j < kChebR; ++j)
                    bp.node_tables.emplace_back(error_term_amplitude(f, region.n, bp.cheb_node_r(j), *bp.eproxy),
                                                opt.quad_rel_tol, bp.table_radius);
            }
        } else {
            // phase 1: one evaluator at r_bar, wide enough for window probing
            bp.table_radius = r_bar + 24.0 * t0 + 4.0;
            bp.probe.emplace(direct_amplitude(f, region.n, r_bar), opt.quad_rel_tol, bp.table_radius);
        }
        plan.bands.push_back(std::move(bp));
    }

    // time window: adapt at the geometric mid radius
    std::vector<BandAtR> at_bar;
    for (const auto& b : plan.bands) at_bar.push_back(b.at(r_bar));
    auto g_bar = [&](double t) { return plan.eval_sum(at_bar, t, r_bar); };
    const double centers[2] = {-r_bar, r_bar};
    plan.truncation = adaptive_time_truncation(g_bar, q, centers, opt.tail_rel_tol, t0, plan.carrier_top);
    plan.t_half_width = plan.truncation.per_center_half_width;

    // phase 2: direct-route node tables sized to the chosen windows
    for (auto& bp : plan.bands) {
        if (bp.decomposition) continue;
        bp.table_radius = plan.r_hi + plan.t_half_width + 8.0;
        for (int j = 0; j < kChebR; ++j)
            bp.node_tables.emplace_back(direct_amplitude(*bp.profile, region.n, bp.cheb_node_r(j)),
                                        opt.quad_rel_tol, bp.table_radius);
        bp.probe.reset();
    }
    return plan;
}

}  // namespace

NormResult extension_annulus_norm(std::span<const RadialProfile> bands, double q, const AnnulusRegion& region,
                                  ExtensionTerm term, const NormOptions& opt) {
    // the error term vanishes identically in dimension 3
    if (term == ExtensionTerm::kError && region.n == 3) return {};

    EnginePlan plan = build_plan(bands, q, region, term, opt);

    NormResult out;
    out.truncation.windows = plan.truncation.windows;
    out.truncation.tail_bound = plan.truncation.tail_bound;
    out.truncation.converged = plan.truncation.converged;

    if (plan.truncation.captured <= 0.0) return out;

    const double w_t = 3.0 * kPi / (std::max(1.0, 0.5 * q) * plan.env_spread * 1.15);
    const double w_r = 3.0 * kPi / (std::max(1.0, 0.5 * q) * 2.0 * plan.carrier_top * 1.15);
    const double fine = radial_integral(plan, w_r, w_t);
    const double coarse = radial_integral(plan, 1.5 * w_r, 1.5 * w_t);

    const double normq = sphere_surface_area(region.n) * fine;
    if (!(normq > 0.0)) return out;

    const double tail_rel = plan.truncation.tail_bound / std::max(plan.truncation.captured, 1e-300);
    out.value = std::pow(normq, 1.0 / q);
    const double rel_err = std::abs(fine - coarse) / std::max(fine, 1e-300) + tail_rel + 1e-9;
    out.abs_error = out.value * rel_err / q;
    return out;
}

NormResult extension_annulus_norm(const RadialProfile& F, double q, const AnnulusRegion& region,
                                  ExtensionTerm term, const NormOptions& opt) {
    return extension_annulus_norm(std::span<const RadialProfile>(&F, 1), q, region, term, opt);
}

NormResult lq_annulus_norm(const std::function<complexd(double, double)>& u, double q,
                           const AnnulusRegion& region, std::span<const double> centers,
                           const NormOptions& opt) {
    if (!(q >= 1.0)) throw std::invalid_argument("lq_annulus_norm: need q >= 1");
    const double r_lo = region.r_lo(), r_hi = region.r_hi();
    const double r_bar = std::sqrt(r_lo * r_hi);
    const double t0 = opt.initial_window > 0.0 ? opt.initial_window : 8.0;
    auto g_bar = [&](double t) { return u(t, r_bar); };
    TimeTruncation tr = adaptive_time_truncation(g_bar, q, centers, opt.tail_rel_tol, t0, 2.0);

    NormResult out;
    out.truncation.windows = tr.windows;
    out.truncation.tail_bound = tr.tail_bound;
    out.truncation.converged = tr.converged;
    if (tr.captured <= 0.0) return out;

    auto psi = [&](double r) -> complexd {
        double mass = 0.0;
        for (const TimeWindow& w : tr.windows) {
            auto f = [&](double t) { return complexd(std::pow(std::abs(u(t, r)), q), 0.0); };
            mass += integrate_panels(f, w.lo(), w.hi(), {}, std::max(2.0, q), 1e-7).value.real();
        }
        return complexd(std::pow(r, region.n - 1.0) * mass, 0.0);
    };
    QuadratureResult rad = integrate_panels(psi, r_lo, r_hi, {}, std::max(2.0, q) * 2.0, 1e-6);

    const double normq = sphere_surface_area(region.n) * rad.value.real();
    if (!(normq > 0.0)) return out;
    out.value = std::pow(normq, 1.0 / q);
    const double tail_rel = tr.tail_bound / std::max(tr.captured, 1e-300);
    out.abs_error =
        out.value * (rad.abs_error / std::max(rad.value.real(), 1e-300) + tail_rel + 1e-9) / q;
    return out;
}

// ===========================================================================
// step functions and Lorentz norms
// ===========================================================================

StepFunction::StepFunction(std::vector<StepPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("StepFunction: empty piece list");
    for (const auto& p : pieces_) {
        if (!(p.measure > 0.0) || !std::isfinite(p.measure))
            throw std::invalid_argument("StepFunction: measures must be positive and finite");
        if (!(p.value >= 0.0) || !std::isfinite(p.value))
            throw std::invalid_argument("StepFunction: values must be >= 0 and finite");
    }
}

std::vector<StepPiece> StepFunction::decreasing_rearrangement() const {
    std::vector<StepPiece> sorted = pieces_;
    std::sort(sorted.begin(), sorted.end(),
              [](const StepPiece& a, const StepPiece& b) { return a.value > b.value; });
    return sorted;
}

double StepFunction::lp_norm(double p) const {
    double acc = 0.0;
    for (const auto& piece : pieces_) acc += piece.measure * std::pow(piece.value, p);
    return std::pow(acc, 1.0 / p);
}

double StepFunction::total_measure() const {
    double acc = 0.0;
    for (const auto& piece : pieces_) acc += piece.measure;
    return acc;
}

StepFunction StepFunction::scaled_measures(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("StepFunction: scale must be positive");
    std::vector<StepPiece> scaled = pieces_;
    for (auto& p : scaled) p.measure *= lambda;
    return StepFunction(std::move(scaled));
}

double lorentz_norm(const StepFunction& f, const LorentzExponents& e) {
    const auto sorted = f.decreasing_rearrangement();
    if (std::isinf(e.q)) {
        // weak-L^p: sup_t t^{1/p} f*(t), attained at right endpoints of steps
        double t = 0.0, best = 0.0;
        for (const auto& piece : sorted) {
            t += piece.measure;
            best = std::max(best, std::pow(t, 1.0 / e.p) * piece.value);
        }
        return best;
    }
    // ||f||^q = q int_0^inf lambda^{q-1} mu(lambda)^{q/p} dlambda
    //         = sum_k v_k^q (t_k^{q/p} - t_{k-1}^{q/p})
    // over the rearrangement breakpoints; this normalization makes L^{p,p}
    // the plain L^p norm and gives indicators exactly m^{1/p}
    const double qp = e.q / e.p;
    double t_prev = 0.0, t_pow_prev = 0.0, acc = 0.0;
    for (const auto& piece : sorted) {
        const double t = t_prev + piece.measure;
        const double t_pow = std::pow(t, qp);
        if (piece.value > 0.0) acc += std::pow(piece.value, e.q) * (t_pow - t_pow_prev);
        t_prev = t;
        t_pow_prev = t_pow;
    }
    return std::pow(acc, 1.0 / e.q);
}

// ===========================================================================
// inequality checkers
// ===========================================================================

namespace {

double sinc(double z) { return std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z; }

struct HyNorms {
    double fourier = 0.0;
    double lorentz = 0.0;
};

HyNorms hy_norms_at_resolution(const std::function<double(double)>& g, double lo, double hi, double p,
                               int n_cells) {
    const double p_conj = p / (p - 1.0);
    const double dx = (hi - lo) / n_cells;
    // pad zero cells on each side so the interpolant vanishes at the ends
    const int n_nodes = n_cells + 5;
    const double x0 = lo - 2.0 * dx;
    std::vector<double> gv(static_cast<std::size_t>(n_nodes));
    for (int j = 0; j < n_nodes; ++j) {
        const double x = x0 + j * dx;
        gv[static_cast<std::size_t>(j)] = (x > lo && x < hi) ? g(x) : 0.0;
    }

    // ghat(xi) = dx sinc^2(xi dx/2) sum_j g_j e^{-i xi x_j} (exact transform of
    // the piecewise-linear interpolant)
    auto ghat_abs = [&](double xi) {
        const complexd rot = std::polar(1.0, -xi * dx);
        complexd phase = std::polar(1.0, -xi * x0);
        complexd acc{0.0, 0.0};
        for (int j = 0; j < n_nodes; ++j) {
            acc += gv[static_cast<std::size_t>(j)] * phase;
            phase *= rot;
        }
        const double s = sinc(0.5 * xi * dx);
        return dx * s * s * std::abs(acc);
    };
    const double cap_xi = 4.0 * kPi / dx;
    const double spread = (hi - lo) + 4.0 * dx;
    const double w_xi = kPi / (std::max(1.0, 0.5 * p_conj) * spread * 1.25);
    const long np = static_cast<long>(std::ceil(cap_xi / w_xi));
    double acc = 0.0;
    for (long k = 0; k < np; ++k) {
        const double a = cap_xi * static_cast<double>(k) / static_cast<double>(np);
        const double b = cap_xi * static_cast<double>(k + 1) / static_cast<double>(np);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double panel = 0.0;
        for (int i = 0; i < GaussRule::kN; ++i)
            panel += GaussRule::kWeights[i] * std::pow(ghat_abs(mid + half * GaussRule::kNodes[i]), p_conj);
        acc += half * panel;
    }
    HyNorms out;
    out.fourier = std::pow(2.0 * acc, 1.0 / p_conj);

    std::vector<StepPiece> pieces;
    pieces.reserve(static_cast<std::size_t>(n_cells));
    for (int j = 0; j < n_cells; ++j) {
        const double v = std::abs(g(lo + (j + 0.5) * dx));
        if (v > 0.0) pieces.push_back({dx, v});
    }
    out.lorentz =
        pieces.empty() ? 0.0 : lorentz_norm(StepFunction(std::move(pieces)), LorentzExponents(p, p_conj));
    return out;
}

}  // namespace

HausdorffYoungReport hausdorff_young_check(const std::function<double(double)>& g, double lo, double hi,
                                           double p, int initial_grid) {
    if (!(p > 1.0) || !(p <= 2.0)) throw std::invalid_argument("hausdorff_young_check: need 1 < p <= 2");
    if (!(hi > lo)) throw std::invalid_argument("hausdorff_young_check: empty support interval");

    int n = std::max(initial_grid, 32);
    HyNorms prev = hy_norms_at_resolution(g, lo, hi, p, n);
    HausdorffYoungReport report;
    report.grid_adequate = false;
    for (int iter = 0; iter < 3; ++iter) {
        const HyNorms next = hy_norms_at_resolution(g, lo, hi, p, 2 * n);
        const double df = std::abs(next.fourier - prev.fourier) / std::max(next.fourier, 1e-300);
        const double dl = std::abs(next.lorentz - prev.lorentz) / std::max(next.lorentz, 1e-300);
        n *= 2;
        prev = next;
        if (df <= 5e-3 && dl <= 5e-3) {
            report.grid_adequate = true;
            break;
        }
    }
    report.grid_points = n;
    report.fourier_norm = prev.fourier;
    report.lorentz_norm = prev.lorentz;
    report.ratio = prev.lorentz > 0.0 ? prev.fourier / prev.lorentz : 0.0;
    return report;
}

HolderLorentzReport holder_lorentz_check(const StepFunction& f, const StepFunction& g,
                                         const LorentzExponents& ef, const LorentzExponents& eg) {
    const auto& fp = f.pieces();
    const auto& gp = g.pieces();
    if (fp.size() != gp.size())
        throw std::invalid_argument("holder_lorentz_check: functions must share one decomposition");
    std::vector<StepPiece> prod(fp.size());
    for (std::size_t i = 0; i < fp.size(); ++i) {
        if (std::abs(fp[i].measure - gp[i].measure) > 1e-12 * fp[i].measure)
            throw std::invalid_argument("holder_lorentz_check: measure decompositions differ");
        prod[i] = {fp[i].measure, fp[i].value * gp[i].value};
    }
    const double inv_p = 1.0 / ef.p + 1.0 / eg.p;
    const double inv_q = (std::isinf(ef.q) ? 0.0 : 1.0 / ef.q) + (std::isinf(eg.q) ? 0.0 : 1.0 / eg.q);
    if (!(inv_p > 0.0) || !std::isfinite(inv_p))
        throw std::invalid_argument("holder_lorentz_check: exponents violate the scaling relation");
    const LorentzExponents prod_exps(1.0 / inv_p,
                                     inv_q > 0.0 ? 1.0 / inv_q : std::numeric_limits<double>::infinity());

    HolderLorentzReport out;
    out.f_norm = lorentz_norm(f, ef);
    out.g_norm = lorentz_norm(g, eg);
    out.product_norm = lorentz_norm(StepFunction(std::move(prod)), prod_exps);
    out.ratio = out.product_norm / std::max(out.f_norm * out.g_norm, 1e-300);
    return out;
}

// ===========================================================================
// weighted Bessel norm
// ===========================================================================

WeightedBesselResult weighted_bessel_norm(int n, double q, double s, double r_max) {
    if (n < 2) throw std::invalid_argument("weighted_bessel_norm: n must be >= 2");
    if (!(q > 0.0) || !(s > 0.0) || !(r_max > 1.0))
        throw std::invalid_argument("weighted_bessel_norm: need q > 0, s > 0, r_max > 1");

    const double m = 0.5 * (n - 2);
    const double a = -0.5 * (n - 2) + (n - 1) / q;
    const double u_max = s * r_max;

    // fast |J_m(u)|: series below the switch, main term + proxied remainder above
    std::optional<ChebyshevProxy> eproxy;
    if (u_max >= 12.0 && n != 3)
        eproxy.emplace(ChebyshevProxy::build(
            [n](double rho) { return error_kernel_mu(0.5 * (n - 3), rho, ErrorKernelSign::kPlus).value; }, 11.8,
            u_max * 1.01, 72, /*log_x=*/true));
    const double rem_pref = 1.0 / (std::tgamma(m + 0.5) * std::sqrt(kPi));
    auto fast_j = [&](double u) -> double {
        if (u < 12.0) return bessel_j_scaled(m, u) * std::pow(u, m);
        const double main = std::sqrt(2.0 / (kPi * u)) * std::sin(u - (2.0 * m - 1.0) * kPi / 4.0);
        if (n == 3) return main;
        const double rem =
            std::pow(0.5 * u, m) * rem_pref * (-2.0) * std::imag(std::polar(1.0, -u) * eproxy->eval(u));
        return main + rem;
    };

    // after u = r s the norm is ||...||^q = s^{-aq-1} int_0^{u_max} |u^a J_m(u)|^q du
    auto block_mass = [&](double u0, double u1) {
        auto f = [&](double u) -> complexd {
            return complexd(std::pow(std::pow(u, a) * std::abs(fast_j(u)), q), 0.0);
        };
        return integrate_panels(f, u0, u1, {}, std::max(2.0, q) * 0.75, 1e-8).value.real();
    };

    WeightedBesselResult out;
    double acc = block_mass(0.0, std::min(1.0, u_max));
    double u_block = 1.0;
    while (u_block < u_max) {
        const double u_next = std::min(2.0 * u_block, u_max);
        const double inc = block_mass(u_block, u_next);
        acc += inc;
        if (u_next >= 2.0 * u_block * (1.0 - 1e-12)) out.block_increments.push_back(inc);
        u_block = u_next;
    }

    const double normq = std::pow(s, -a * q - 1.0) * acc;
    out.norm.value = std::pow(normq, 1.0 / q);
    out.norm.abs_error = out.norm.value * 1e-6;

    // geometric-decay test on the dyadic increments (threshold ratio 0.9)
    const std::size_t nb = out.block_increments.size();
    if (nb >= 3) {
        std::vector<double> ratios;
        for (std::size_t k = nb - 3; k + 1 < nb; ++k)
            ratios.push_back(out.block_increments[k + 1] / std::max(out.block_increments[k], 1e-300));
        std::sort(ratios.begin(), ratios.end());
        out.divergent = ratios[ratios.size() / 2] >= 0.9;
    }
    return out;
}

}  // namespace conelab
