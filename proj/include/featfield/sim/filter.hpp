#pragma once

#include <numbers>
#include <optional>
#include <stdexcept>

#include "featfield/vec2.hpp"

namespace featfield::sim {

/// Smoothing factor of a first-order low-pass filter sampled at dt.
inline double lowpass_alpha(double dt, double cutoff_hz) {
    if (!(dt > 0.0)) throw std::invalid_argument("lowpass: dt must be > 0");
    if (!(cutoff_hz > 0.0)) throw std::invalid_argument("lowpass: cutoff must be > 0");
    const double rc = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
    return dt / (dt + rc);
}

/// One exponential-smoothing step, y <- y + alpha * (x - y), component-wise.
inline Vec2 low_pass(Vec2 previous, Vec2 input, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("lowpass: alpha in (0,1]");
    return previous + (input - previous) * alpha;
}

/**
 * @brief Low-pass filter over the feature direction.
 *
 * The raw smoothed vector is the state; the emitted value is its
 * normalization, or nothing while the state stays below the epsilon
 * threshold. A missing input direction smooths toward zero.
 */
class DirectionFilter {
  public:
    DirectionFilter(double alpha, double epsilon) : alpha_(alpha), epsilon_(epsilon) {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw std::invalid_argument("lowpass: alpha in (0,1]");
    }

    std::optional<Vec2> update(std::optional<Vec2> direction) {
        state_ = low_pass(state_, direction.value_or(Vec2{0.0, 0.0}), alpha_);
        if (state_.norm() <= epsilon_) return std::nullopt;
        return state_.normalized();
    }

    const Vec2& state() const { return state_; }

  private:
    double alpha_;
    double epsilon_;
    Vec2 state_{0.0, 0.0};
};

}  // namespace featfield::sim
