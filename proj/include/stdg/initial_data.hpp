#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace stdg {

// Initial datum u0(x): a Riemann jump, a smooth compact bump, or a sine wave.
struct InitialData {
    enum class Kind { Riemann, Bump, Sine, Constant };
    Kind kind = Kind::Riemann;
    double a = 1.0, b = 0.0, x0 = 0.0;              // riemann(a, b, x0)
    double center = 0.0, width = 1.0, height = 1.0;  // bump(center, width, height)
    double amp = 1.0, period = 2.0;                  // sine(amp, period)
    double value = 0.0;                              // constant

    double operator()(double x) const {
        switch (kind) {
            case Kind::Riemann: return x < x0 ? a : b;
            case Kind::Bump: {
                const double s = (x - center) / width;
                if (std::abs(s) >= 1.0) return 0.0;
                return height * std::exp(1.0 - 1.0 / (1.0 - s * s));
            }
            case Kind::Sine: return amp * std::sin(2.0 * M_PI * x / period);
            case Kind::Constant: return value;
        }
        return 0.0;
    }

    double min_value() const {
        switch (kind) {
            case Kind::Riemann: return std::min(a, b);
            case Kind::Bump: return std::min(0.0, height);
            case Kind::Sine: return -std::abs(amp);
            case Kind::Constant: return value;
        }
        return 0.0;
    }
    double max_value() const {
        switch (kind) {
            case Kind::Riemann: return std::max(a, b);
            case Kind::Bump: return std::max(0.0, height);
            case Kind::Sine: return std::abs(amp);
            case Kind::Constant: return value;
        }
        return 0.0;
    }
    double sup_norm() const { return std::max(std::abs(min_value()), std::abs(max_value())); }
    double oscillation() const { return max_value() - min_value(); }

    std::string describe() const;
};

}  // namespace stdg
