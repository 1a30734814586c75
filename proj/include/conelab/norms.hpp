#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "conelab/extension.hpp"
#include "conelab/profile.hpp"
#include "conelab/quadrature.hpp"
#include "conelab/types.hpp"

namespace conelab {

// Dyadic annulus A_R = {x in R^n : R/2 <= |x| <= R}.
struct AnnulusRegion {
    double R = 1.0;
    int n = 2;

    AnnulusRegion(double radius, int dim) : R(radius), n(dim) {
        if (!is_dyadic(R)) throw std::invalid_argument("AnnulusRegion: R must be dyadic");
        if (n < 2) throw std::invalid_argument("AnnulusRegion: n must be >= 2");
    }
    double r_lo() const { return 0.5 * R; }
    double r_hi() const { return R; }
};

struct TruncationReport {
    std::vector<TimeWindow> windows;
    double tail_bound = 0.0;
    bool converged = true;
};

struct NormResult {
    double value = 0.0;
    double abs_error = 0.0;
    TruncationReport truncation;
};

struct NormOptions {
    double tail_rel_tol = 1e-4;      // omitted |u|^q mass relative to captured
    double quad_rel_tol = 1e-6;      // envelope/table construction tolerance
    double initial_window = 0.0;     // 0: auto, 8 / (min band width)
    double table_radius = 96.0;      // envelope table extent at dyadic level 1
};

// ||u||_{L^q(R x A_R)} for a generic (t, r)-evaluator, with adaptive time
// truncation around the given centers.  Slow but assumption-free.
NormResult lq_annulus_norm(const std::function<complexd(double, double)>& u, double q,
                           const AnnulusRegion& region, std::span<const double> centers,
                           const NormOptions& opt = {});

enum class ExtensionTerm { kFull, kMain, kError };
std::string to_string(ExtensionTerm term);

// Same norm for (sums of) cone extensions of dyadically supported profiles,
// via per-annulus envelope tables.  Each band is routed through the main/error
// decomposition when r * support_lo >= 1 on the whole annulus, and through the
// polar (scaled Bessel) form otherwise.
NormResult extension_annulus_norm(std::span<const RadialProfile> bands, double q,
                                  const AnnulusRegion& region, ExtensionTerm term,
                                  const NormOptions& opt = {});
NormResult extension_annulus_norm(const RadialProfile& F, double q, const AnnulusRegion& region,
                                  ExtensionTerm term, const NormOptions& opt = {});

// --- step functions and Lorentz norms ----------------------------------------

struct StepPiece {
    double measure = 0.0;
    double value = 0.0;
};

// Finite nonnegative step function, kept as unordered (measure, value) pieces;
// the decreasing rearrangement is formed on demand.
class StepFunction {
  public:
    explicit StepFunction(std::vector<StepPiece> pieces);

    const std::vector<StepPiece>& pieces() const { return pieces_; }
    std::vector<StepPiece> decreasing_rearrangement() const;
    double lp_norm(double p) const;
    double total_measure() const;
    StepFunction scaled_measures(double lambda) const;

  private:
    std::vector<StepPiece> pieces_;
};

struct LorentzExponents {
    double p = 1.0;
    double q = 1.0;  // may be +infinity (weak-L^p)

    LorentzExponents(double pp, double qq) : p(pp), q(qq) {
        if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("LorentzExponents: need finite p > 0");
        if (!(q > 0.0)) throw std::invalid_argument("LorentzExponents: need q > 0");
    }
};

// ||f||_{p,q} = (int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}, normalized so that
// ||f||_{p,p} is the plain L^p norm; q = inf gives sup_t t^{1/p} f*(t).
double lorentz_norm(const StepFunction& f, const LorentzExponents& e);

// --- inequality checkers ------------------------------------------------------

struct HausdorffYoungReport {
    double ratio = 0.0;         // ||ghat||_{p'} / ||g||_{p,p'}
    double fourier_norm = 0.0;  // ||ghat||_{p'}
    double lorentz_norm = 0.0;  // ||g||_{p,p'}
    bool grid_adequate = true;
    int grid_points = 0;
};

// Transform convention ghat(xi) = int g(x) e^{-i x xi} dx (no prefactor); the
// Plancherel constant under it is sqrt(2 pi).
HausdorffYoungReport hausdorff_young_check(const std::function<double(double)>& g, double lo, double hi,
                                           double p, int initial_grid = 256);

struct HolderLorentzReport {
    double ratio = 0.0;
    double product_norm = 0.0;
    double f_norm = 0.0;
    double g_norm = 0.0;
};

// ||fg||_{p,q} / (||f||_{p1,q1} ||g||_{p2,q2}) with 1/p = 1/p1 + 1/p2 and
// 1/q = 1/q1 + 1/q2; f and g must share one measure-space decomposition.
HolderLorentzReport holder_lorentz_check(const StepFunction& f, const StepFunction& g,
                                         const LorentzExponents& ef, const LorentzExponents& eg);

// --- weighted Bessel norm ------------------------------------------------------

struct WeightedBesselResult {
    NormResult norm;  // truncated at r_max
    bool divergent = false;
    // norm^q increments over dyadic blocks [2^{k-1}, 2^k] of r*s
    std::vector<double> block_increments;
};

// || r^{-(n-2)/2 + (n-1)/q} J_{(n-2)/2}(r s) ||_{L^q_r(0, r_max)}.  Converges as
// r_max -> inf exactly when q > 2n/(n-1); divergence (log growth) is reported
// as a structured flag.
WeightedBesselResult weighted_bessel_norm(int n, double q, double s, double r_max);

}  // namespace conelab
