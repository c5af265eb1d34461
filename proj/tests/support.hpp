#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "hatchcycle/model.hpp"

namespace support {

inline constexpr double kLbar = 1.13;

/// b_E = 20.94, d_E = 1/180, d_L = 0.15 with the given competition coefficient.
inline hatchcycle::ReducedParams reference_params(double c = 1.0) { return {20.94, 1.0 / 180.0, 0.15, c}; }

inline double rel_err(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

private:
    std::mt19937_64 gen_;
};

/// Central-difference Jacobian of a map R^N -> R^N.
template <std::size_t N, class F>
hatchcycle::Matrix<N> fd_jacobian(F&& f, const std::array<double, N>& x, double rel_step = 1e-6) {
    hatchcycle::Matrix<N> J{};
    for (std::size_t j = 0; j < N; ++j) {
        const double h = rel_step * std::max(1.0, std::abs(x[j]));
        auto xp = x;
        auto xm = x;
        xp[j] += h;
        xm[j] -= h;
        const auto fp = f(xp);
        const auto fm = f(xm);
        for (std::size_t i = 0; i < N; ++i) J[i][j] = (fp[i] - fm[i]) / (2 * h);
    }
    return J;
}

}  // namespace support
