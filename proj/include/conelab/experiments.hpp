#pragma once

#include <span>
#include <string>
#include <vector>

#include "conelab/norms.hpp"
#include "conelab/profile.hpp"
#include "conelab/types.hpp"

namespace conelab {

// (n, p, q) with the derived conjugate exponent.
struct ExponentTriple {
    int n = 2;
    double p = 2.0;
    double q = 4.0;

    ExponentTriple(int nn, double pp, double qq) : n(nn), p(pp), q(qq) {
        if (n < 2) throw std::invalid_argument("ExponentTriple: n must be >= 2");
        if (!(p >= 1.0)) throw std::invalid_argument("ExponentTriple: p must be in [1, inf]");
        if (!(q > 0.0)) throw std::invalid_argument("ExponentTriple: q must be positive");
    }
    double p_conj() const {
        if (std::isinf(p)) return 1.0;
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return p / (p - 1.0);
    }
    double critical_q() const { return 2.0 * n / (n - 1.0); }
    // far-field dyadic decay exponent -(n-1)/2 [1 - 2n/(q(n-1))]
    double alpha_far() const { return -0.5 * (n - 1.0) * (1.0 - 2.0 * n / (q * (n - 1.0))); }
    // near-field growth exponent n/q
    double alpha_near() const { return n / q; }
    // error-term exponent -(n+1)/2 + n/q
    double alpha_error() const { return -0.5 * (n + 1.0) + n / q; }
};

struct FeasibilityFlags {
    bool conjecture_region = false;
    bool scaling_critical_line = false;
    bool dyadic_extended_region = false;
    bool cordoba_stein_region = false;
};

FeasibilityFlags feasibility_classify(const ExponentTriple& exps);

// alpha(K) of the dyadic restriction bound; defined on dyadic K only.
double alpha_exponent(int n, double q, double K);

struct SweepPoint {
    double R = 1.0;
    NormResult norm;
    bool flagged = false;
    std::string flag;
};

// Per-annulus norms of the selected term over a dyadic R range.
std::vector<SweepPoint> dyadic_sweep(const RadialProfile& F, const ExponentTriple& exps, DyadicRange r_range,
                                     ExtensionTerm term, const NormOptions& opt = {}, int workers = 1);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;      // in log2 units
    double confidence_width = 0.0;  // slope stability under window changes
    int points_used = 0;
};

SlopeFit fit_slope_xy(std::span<const double> x_log2, std::span<const double> y_log2);
// Least squares in (log2 R, log2 norm); flagged or zero-norm points excluded.
SlopeFit fit_slope(std::span<const SweepPoint> sweep);

struct SchurSum {
    std::vector<double> partial_sums;  // cumulative over |log2 K| <= j
    double value = 0.0;
    bool divergent = false;
};

// sum over dyadic K with |log2 K| <= range of K^{alpha(K)}.
SchurSum schur_sum(const ExponentTriple& exps, int k_range_log2);

// ||f||_{L^p(S, dsigma)} = (|S^{n-1}| int |F(s)|^p s^{n-2} ds)^{1/p}.
double profile_lp_norm(const RadialProfile& F, double p, int n);

struct GlobalCheckResult {
    double lhs_norm = 0.0;  // ||(f dsigma)^v||_{L^q} by annulus additivity
    double rhs_norm = 0.0;  // ||f||_{L^p(S, dsigma)}
    double ratio = 0.0;
    std::vector<SweepPoint> per_annulus;
};

// Global restriction ratio for a multi-band profile on the scaling-critical
// line (n+1)/q = (n-1)/p' with q > 2n/(n-1).
GlobalCheckResult global_restriction_check(std::span<const RadialProfile> bands, const ExponentTriple& exps,
                                           DyadicRange r_range, const NormOptions& opt = {}, int workers = 1);

struct BandSharpnessPoint {
    double delta = 1.0;
    double lhs = 0.0;  // annulus-summed extension norm
    double rhs = 0.0;  // ||f||_p
    bool flagged = false;
};

struct BandSharpnessResult {
    std::vector<BandSharpnessPoint> points;
    SlopeFit lhs_fit;            // log2 LHS against log2 delta
    double rhs_exponent = 0.0;   // 1/p, exact
    bool cutoff_flagged = false;
};

// LHS/RHS delta-exponents for band indicators; demonstrates the necessity of
// q >= p' within the radial class.
BandSharpnessResult band_sharpness(std::span<const double> deltas, const ExponentTriple& exps, int j_max,
                                   const NormOptions& opt = {}, int workers = 1);

}  // namespace conelab
