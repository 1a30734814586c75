#include "conelab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conelab {

namespace {

void check_support(double a, double b) {
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("profile support must satisfy 0 < a < b");
}

// Level M with [a, b] inside [M, 2M]; the canonical profiles use a itself.
double level_for(double a, double b) {
    if (!is_dyadic(a)) {
        // round a down to a dyadic number and require b to still fit
        int exp = 0;
        std::frexp(a, &exp);
        double m = std::ldexp(1.0, exp - 1);
        if (b > 2.0 * m + 1e-12 * m) throw std::invalid_argument("profile support does not fit a dyadic block [M, 2M]");
        return m;
    }
    if (b > 2.0 * a) throw std::invalid_argument("profile support does not fit a dyadic block [M, 2M]");
    return a;
}

}  // namespace

std::string to_string(ProfileShape shape) {
    switch (shape) {
        case ProfileShape::kConstant: return "constant";
        case ProfileShape::kPower: return "power";
        case ProfileShape::kSmoothBump: return "smooth_bump";
        case ProfileShape::kBandIndicator: return "band_indicator";
        case ProfileShape::kSampled: return "sampled";
    }
    return "unknown";
}

RadialProfile RadialProfile::constant(double value, double a, double b) {
    check_support(a, b);
    RadialProfile p;
    p.shape_ = ProfileShape::kConstant;
    p.a_ = a;
    p.b_ = b;
    p.const_value_ = value;
    p.level_ = level_for(a, b);
    return p;
}

RadialProfile RadialProfile::power(double exponent, double a, double b) {
    check_support(a, b);
    RadialProfile p;
    p.shape_ = ProfileShape::kPower;
    p.a_ = a;
    p.b_ = b;
    p.exponent_ = exponent;
    p.level_ = level_for(a, b);
    return p;
}

RadialProfile RadialProfile::smooth_bump(double a, double b) {
    check_support(a, b);
    RadialProfile p;
    p.shape_ = ProfileShape::kSmoothBump;
    p.a_ = a;
    p.b_ = b;
    p.level_ = level_for(a, b);
    return p;
}

RadialProfile RadialProfile::band_indicator(double delta) {
    if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("band_indicator: need 0 < delta <= 1");
    RadialProfile p;
    p.shape_ = ProfileShape::kBandIndicator;
    p.a_ = 1.0;
    p.b_ = 1.0 + delta;
    p.delta_ = delta;
    p.level_ = 1.0;
    return p;
}

RadialProfile RadialProfile::sampled(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size())
        throw std::invalid_argument("sampled profile: need matching grid/values with >= 2 nodes");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("sampled profile: grid must be strictly increasing");
    check_support(grid.front(), grid.back());
    RadialProfile p;
    p.shape_ = ProfileShape::kSampled;
    p.a_ = grid.front();
    p.b_ = grid.back();
    p.level_ = level_for(p.a_, p.b_);
    p.grid_ = std::move(grid);
    p.values_ = std::move(values);
    return p;
}

double RadialProfile::operator()(double s) const {
    if (s < a_ || s > b_) return 0.0;
    switch (shape_) {
        case ProfileShape::kConstant: return amplitude_ * const_value_;
        case ProfileShape::kBandIndicator: return amplitude_;
        case ProfileShape::kPower: return amplitude_ * const_value_ * std::pow(s, exponent_);
        case ProfileShape::kSmoothBump: {
            const double u = (2.0 * s - a_ - b_) / (b_ - a_);
            const double w = 1.0 - u * u;
            return w > 0.0 ? amplitude_ * std::exp(-1.0 / w) : 0.0;
        }
        case ProfileShape::kSampled: {
            auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
            std::size_t i = it == grid_.begin() ? 1 : static_cast<std::size_t>(it - grid_.begin());
            if (i >= grid_.size()) i = grid_.size() - 1;
            const double x0 = grid_[i - 1], x1 = grid_[i];
            const double w = (s - x0) / (x1 - x0);
            return amplitude_ * ((1.0 - w) * values_[i - 1] + w * values_[i]);
        }
    }
    return 0.0;
}

RadialProfile RadialProfile::scaled_by(double c) const {
    if (!std::isfinite(c)) throw std::invalid_argument("RadialProfile::scaled_by: scale must be finite");
    RadialProfile p = *this;
    p.amplitude_ *= c;
    return p;
}

std::vector<double> RadialProfile::breakpoints() const {
    if (shape_ == ProfileShape::kSampled) return grid_;
    return {a_, b_};
}

std::vector<SmoothPiece> RadialProfile::pieces() const {
    std::vector<SmoothPiece> out;
    switch (shape_) {
        case ProfileShape::kConstant:
        case ProfileShape::kBandIndicator: {
            const double c = shape_ == ProfileShape::kConstant ? const_value_ : 1.0;
            out.push_back({a_, b_, [c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }});
            break;
        }
        case ProfileShape::kPower: {
            const double k = exponent_;
            const double c = const_value_;
            out.push_back({a_, b_,
                           [c, k](double s) { return c * std::pow(s, k); },
                           [c, k](double s) { return c * k * std::pow(s, k - 1.0); },
                           [c, k](double s) { return c * k * (k - 1.0) * std::pow(s, k - 2.0); }});
            break;
        }
        case ProfileShape::kSmoothBump: {
            const double a = a_, b = b_;
            const double du = 2.0 / (b - a);
            auto bump = [a, b](double s) {
                const double u = (2.0 * s - a - b) / (b - a);
                const double w = 1.0 - u * u;
                return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
            };
            auto d1 = [a, b, du, bump](double s) {
                const double u = (2.0 * s - a - b) / (b - a);
                const double w = 1.0 - u * u;
                if (!(w > 0.0)) return 0.0;
                return bump(s) * (-2.0 * u / (w * w)) * du;
            };
            auto d2 = [a, b, du, bump](double s) {
                const double u = (2.0 * s - a - b) / (b - a);
                const double w = 1.0 - u * u;
                if (!(w > 0.0)) return 0.0;
                const double phi1 = -2.0 * u / (w * w);
                const double phi2 = -2.0 / (w * w) - 8.0 * u * u / (w * w * w);
                return bump(s) * (phi1 * phi1 + phi2) * du * du;
            };
            out.push_back({a_, b_, bump, d1, d2});
            break;
        }
        case ProfileShape::kSampled: {
            for (std::size_t i = 1; i < grid_.size(); ++i) {
                const double x0 = grid_[i - 1], x1 = grid_[i];
                const double y0 = values_[i - 1], y1 = values_[i];
                const double slope = (y1 - y0) / (x1 - x0);
                out.push_back({x0, x1,
                               [x0, y0, slope](double s) { return y0 + slope * (s - x0); },
                               [slope](double) { return slope; },
                               [](double) { return 0.0; }});
            }
            break;
        }
    }
    if (amplitude_ != 1.0) {
        const double amp = amplitude_;
        for (auto& pc : out) {
            pc.f = [amp, f = pc.f](double s) { return amp * f(s); };
            pc.d1 = [amp, d1 = pc.d1](double s) { return amp * d1(s); };
            pc.d2 = [amp, d2 = pc.d2](double s) { return amp * d2(s); };
        }
    }
    return out;
}

double RadialProfile::total_variation() const {
    const double amp = std::abs(amplitude_);
    switch (shape_) {
        case ProfileShape::kConstant: return amp * std::abs(const_value_);
        case ProfileShape::kBandIndicator: return amp;
        case ProfileShape::kPower:
            return amp * std::abs(const_value_) *
                   (std::abs(std::pow(b_, exponent_) - std::pow(a_, exponent_)) + std::abs(std::pow(a_, exponent_)));
        case ProfileShape::kSmoothBump: return amp * 2.0 * std::exp(-1.0);
        case ProfileShape::kSampled: {
            double tv = std::abs(values_.front());
            for (std::size_t i = 1; i < values_.size(); ++i) tv += std::abs(values_[i] - values_[i - 1]);
            tv += std::abs(values_.back());
            return amp * tv;
        }
    }
    return 0.0;
}

double RadialProfile::sup_abs() const {
    const double amp = std::abs(amplitude_);
    switch (shape_) {
        case ProfileShape::kConstant: return amp * std::abs(const_value_);
        case ProfileShape::kBandIndicator: return amp;
        case ProfileShape::kPower:
            return amp * std::abs(const_value_) * std::max(std::pow(a_, exponent_), std::pow(b_, exponent_));
        case ProfileShape::kSmoothBump: return amp * std::exp(-1.0);
        case ProfileShape::kSampled: {
            double m = 0.0;
            for (double v : values_) m = std::max(m, std::abs(v));
            return amp * m;
        }
    }
    return 0.0;
}

RadialProfile rescale_profile(const RadialProfile& f, double M) {
    if (!is_dyadic(M)) throw std::invalid_argument("rescale_profile: M must be dyadic");
    if (f.dyadic_level() != 1.0) throw std::invalid_argument("rescale_profile: profile must have dyadic level 1");
    RadialProfile p = f;
    p.a_ = f.a_ * M;
    p.b_ = f.b_ * M;
    p.level_ = f.level_ * M;
    if (f.shape_ == ProfileShape::kSampled) {
        for (double& x : p.grid_) x *= M;
    }
    if (f.shape_ == ProfileShape::kPower) {
        // F_M(s) = F(s/M) = M^{-k} s^k
        p.const_value_ = f.const_value_ * std::pow(M, -f.exponent_);
    }
    return p;
}

}  // namespace conelab
