#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conelab/types.hpp"

namespace conelab {

enum class ProfileShape { kConstant, kPower, kSmoothBump, kBandIndicator, kSampled };

std::string to_string(ProfileShape shape);

// One maximal interval on which the radial trace is smooth. f/d1/d2 are valid
// on the closed interval [lo, hi]; at the ends they give one-sided limits.
struct SmoothPiece {
    double lo = 0.0;
    double hi = 0.0;
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

// Radial trace F(s) = f(|xi|, xi) of a cylindrically symmetric function on the
// cone, supported on [a, b] with 0 < a < b and [a, b] inside [M, 2M] for the
// dyadic level M.
class RadialProfile {
  public:
    static RadialProfile constant(double value = 1.0, double a = 1.0, double b = 2.0);
    static RadialProfile power(double exponent, double a = 1.0, double b = 2.0);
    static RadialProfile smooth_bump(double a = 1.0, double b = 2.0);
    // Characteristic function of the band [1, 1+delta], 0 < delta <= 1.
    static RadialProfile band_indicator(double delta);
    // Piecewise-linear interpolant of (grid, values); grid strictly increasing.
    static RadialProfile sampled(std::vector<double> grid, std::vector<double> values);

    double operator()(double s) const;

    ProfileShape shape() const { return shape_; }
    double support_lo() const { return a_; }
    double support_hi() const { return b_; }
    double dyadic_level() const { return level_; }
    double band_delta() const { return delta_; }
    double power_exponent() const { return exponent_; }

    // Support endpoints plus interior kinks, increasing.
    std::vector<double> breakpoints() const;
    std::vector<SmoothPiece> pieces() const;
    double total_variation() const;
    double sup_abs() const;
    // True when F and all its derivatives vanish at the support endpoints.
    bool has_smooth_cutoff() const { return shape_ == ProfileShape::kSmoothBump; }

    double amplitude() const { return amplitude_; }
    RadialProfile scaled_by(double c) const;

    friend RadialProfile rescale_profile(const RadialProfile& f, double M);

  private:
    RadialProfile() = default;
    void set_level_from_support();

    ProfileShape shape_ = ProfileShape::kConstant;
    double a_ = 1.0, b_ = 2.0;
    double level_ = 1.0;
    double amplitude_ = 1.0;  // uniform scale applied to every shape
    double const_value_ = 1.0;
    double exponent_ = 0.0;
    double delta_ = 1.0;
    std::vector<double> grid_;
    std::vector<double> values_;
};

// F_M(s) = F(s/M): support and dyadic level scale by M. Requires
// f.dyadic_level() == 1 and dyadic M.
RadialProfile rescale_profile(const RadialProfile& f, double M);

}  // namespace conelab
