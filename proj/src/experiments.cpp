#include "conelab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace conelab {

FeasibilityFlags feasibility_classify(const ExponentTriple& exps) {
    FeasibilityFlags flags;
    const double pc = exps.p_conj();
    const double lhs = (exps.n + 1.0) / exps.q;
    const double rhs = std::isinf(pc) ? 0.0 : (exps.n - 1.0) / pc;
    const double eps = 1e-12;
    const bool q_open = exps.q > exps.critical_q() + eps;
    flags.conjecture_region = q_open && lhs <= rhs + eps;
    flags.scaling_critical_line = std::abs(lhs - rhs) <= eps * std::max(1.0, lhs);
    flags.dyadic_extended_region =
        q_open && exps.q + eps >= std::max(2.0, std::isinf(pc) ? 1.0 : pc);
    flags.cordoba_stein_region =
        exps.p == 2.0 && exps.q + eps >= 2.0 * (exps.n + 1.0) / (exps.n - 1.0);
    return flags;
}

double alpha_exponent(int n, double q, double K) {
    if (n < 2 || !(q > 0.0)) throw std::invalid_argument("alpha_exponent: bad (n, q)");
    if (!is_dyadic(K)) throw std::invalid_argument("alpha_exponent: K must be dyadic");
    if (K >= 2.0) return -0.5 * (n - 1.0) * (1.0 - 2.0 * n / (q * (n - 1.0)));
    return (n - 1.0) / q;
}

namespace {

template <class Fn>
void parallel_for(int count, int workers, Fn&& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<SweepPoint> dyadic_sweep(const RadialProfile& F, const ExponentTriple& exps, DyadicRange r_range,
                                     ExtensionTerm term, const NormOptions& opt, int workers) {
    if (F.dyadic_level() != 1.0)
        throw std::invalid_argument("dyadic_sweep: canonical sweeps take a level-1 profile");
    if (term != ExtensionTerm::kFull && r_range.lo_log2 < 1)
        throw std::invalid_argument("dyadic_sweep: main/error terms require R >= 2");
    const int count = r_range.count();
    if (count <= 0) throw std::invalid_argument("dyadic_sweep: empty R range");

    std::vector<SweepPoint> out(static_cast<std::size_t>(count));
    parallel_for(count, workers, [&](int i) {
        SweepPoint& pt = out[static_cast<std::size_t>(i)];
        pt.R = r_range.value(i);
        try {
            pt.norm = extension_annulus_norm(F, exps.q, AnnulusRegion(pt.R, exps.n), term, opt);
            if (!pt.norm.truncation.converged) {
                pt.flagged = true;
                pt.flag = "truncation-unstable";
            }
        } catch (const std::exception& e) {
            pt.flagged = true;
            pt.flag = e.what();
        }
    });
    return out;
}

SlopeFit fit_slope_xy(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 4)
        throw std::invalid_argument("fit_slope: need at least 4 points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw std::invalid_argument("fit_slope: degenerate abscissae");
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double x_lo = x[0], x_hi = x[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
        fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.slope * x[i] - fit.intercept));
        x_lo = std::min(x_lo, x[i]);
        x_hi = std::max(x_hi, x[i]);
    }
    fit.confidence_width = 4.0 * fit.max_residual / std::max(0.5 * (x_hi - x_lo), 1e-12) + 1e-12;
    fit.points_used = static_cast<int>(x.size());
    return fit;
}

SlopeFit fit_slope(std::span<const SweepPoint> sweep) {
    std::vector<double> x, y;
    for (const auto& pt : sweep) {
        if (pt.flagged || !(pt.norm.value > 0.0)) continue;
        x.push_back(std::log2(pt.R));
        y.push_back(std::log2(pt.norm.value));
    }
    return fit_slope_xy(x, y);
}

SchurSum schur_sum(const ExponentTriple& exps, int k_range_log2) {
    if (k_range_log2 < 1) throw std::invalid_argument("schur_sum: range must be >= 1");
    SchurSum out;
    double total = 1.0;  // K = 1 term: 1^{alpha(1)}
    out.partial_sums.push_back(total);
    double prev_far = 0.0;
    bool geometric = true;
    for (int j = 1; j <= k_range_log2; ++j) {
        const double k_hi = std::ldexp(1.0, j);
        const double k_lo = std::ldexp(1.0, -j);
        const double far = std::pow(k_hi, alpha_exponent(exps.n, exps.q, k_hi));
        const double near = std::pow(k_lo, alpha_exponent(exps.n, exps.q, k_lo));
        total += far + near;
        out.partial_sums.push_back(total);
        if (j > 1 && far >= prev_far * (1.0 - 1e-12)) geometric = false;
        prev_far = far;
    }
    out.value = total;
    out.divergent = !geometric;
    return out;
}

double profile_lp_norm(const RadialProfile& F, double p, int n) {
    if (n < 2) throw std::invalid_argument("profile_lp_norm: n must be >= 2");
    if (std::isinf(p)) return F.sup_abs();
    if (!(p >= 1.0)) throw std::invalid_argument("profile_lp_norm: p must be in [1, inf]");
    auto f = [&](double s) { return complexd(std::pow(std::abs(F(s)), p) * std::pow(s, n - 2.0), 0.0); };
    const auto breaks = F.breakpoints();
    const QuadratureResult q = integrate_panels(f, F.support_lo(), F.support_hi(), breaks, 0.0, 1e-11);
    return std::pow(sphere_surface_area(n) * q.value.real(), 1.0 / p);
}

GlobalCheckResult global_restriction_check(std::span<const RadialProfile> bands, const ExponentTriple& exps,
                                           DyadicRange r_range, const NormOptions& opt, int workers) {
    if (bands.empty()) throw std::invalid_argument("global_restriction_check: need at least one band");
    const FeasibilityFlags flags = feasibility_classify(exps);
    if (!flags.scaling_critical_line || !(exps.q > exps.critical_q()))
        throw std::invalid_argument(
            "global_restriction_check: triple must sit on the scaling-critical line with q > 2n/(n-1)");

    GlobalCheckResult out;
    const int count = r_range.count();
    out.per_annulus.resize(static_cast<std::size_t>(count));
    parallel_for(count, workers, [&](int i) {
        SweepPoint& pt = out.per_annulus[static_cast<std::size_t>(i)];
        pt.R = r_range.value(i);
        try {
            pt.norm = extension_annulus_norm(bands, exps.q, AnnulusRegion(pt.R, exps.n), ExtensionTerm::kFull, opt);
            if (!pt.norm.truncation.converged) {
                pt.flagged = true;
                pt.flag = "truncation-unstable";
            }
        } catch (const std::exception& e) {
            pt.flagged = true;
            pt.flag = e.what();
        }
    });

    double lhs_q = 0.0;
    for (const auto& pt : out.per_annulus) lhs_q += std::pow(pt.norm.value, exps.q);
    out.lhs_norm = std::pow(lhs_q, 1.0 / exps.q);

    double rhs_p = 0.0;
    for (const auto& f : bands) rhs_p += std::pow(profile_lp_norm(f, exps.p, exps.n), exps.p);
    out.rhs_norm = std::pow(rhs_p, 1.0 / exps.p);
    out.ratio = out.lhs_norm / std::max(out.rhs_norm, 1e-300);
    return out;
}

BandSharpnessResult band_sharpness(std::span<const double> deltas, const ExponentTriple& exps, int j_max,
                                   const NormOptions& opt, int workers) {
    if (!(exps.q > exps.critical_q()))
        throw std::invalid_argument("band_sharpness: requires q > 2n/(n-1)");
    if (deltas.empty()) throw std::invalid_argument("band_sharpness: empty delta list");

    BandSharpnessResult out;
    out.points.resize(deltas.size());
    out.rhs_exponent = 1.0 / exps.p;

    parallel_for(static_cast<int>(deltas.size()), workers, [&](int i) {
        BandSharpnessPoint& pt = out.points[static_cast<std::size_t>(i)];
        pt.delta = deltas[static_cast<std::size_t>(i)];
        const RadialProfile F = RadialProfile::band_indicator(pt.delta);
        // the extension concentrates on a 1/delta-thick neighborhood of the
        // backward cone; flag sweeps whose annulus cutoff cannot see it
        if (std::ldexp(1.0, j_max) < 2.0 / pt.delta) pt.flagged = true;
        double lhs_q = 0.0;
        for (int j = 0; j <= j_max; ++j) {
            const double R = std::ldexp(1.0, j);
            NormOptions o = opt;
            if (o.initial_window <= 0.0) o.initial_window = 8.0 / pt.delta;
            const NormResult nr = extension_annulus_norm(F, exps.q, AnnulusRegion(R, exps.n),
                                                         ExtensionTerm::kFull, o);
            if (!nr.truncation.converged) pt.flagged = true;
            lhs_q += std::pow(nr.value, exps.q);
        }
        pt.lhs = std::pow(lhs_q, 1.0 / exps.q);
        pt.rhs = profile_lp_norm(F, exps.p, exps.n);
    });

    std::vector<double> x, y;
    for (const auto& pt : out.points) {
        out.cutoff_flagged = out.cutoff_flagged || pt.flagged;
        if (pt.flagged || pt.delta >= 1.0 || !(pt.lhs > 0.0)) continue;  // delta = 1 is the reference band
        x.push_back(std::log2(pt.delta));
        y.push_back(std::log2(pt.lhs));
    }
    if (x.size() >= 4) out.lhs_fit = fit_slope_xy(x, y);
    return out;
}

}  // namespace conelab
