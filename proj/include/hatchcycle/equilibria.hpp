#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hatchcycle/hatch.hpp"
#include "hatchcycle/model.hpp"

namespace hatchcycle {

enum class StabilityClass { StableNode, StableFocus, UnstableNode, UnstableFocus, Saddle, MarginalCenter };

std::string_view to_string(StabilityClass c);
bool is_unstable(StabilityClass c);

struct Equilibrium {
    double E_bar;
    double L_bar;
    double trace;
    double det;
    double discriminant;
    std::complex<double> lambda1;
    std::complex<double> lambda2;
    StabilityClass classification;
    int multiplicity = 1;  // > 1 when nearby roots were merged
};

/// Steady states of the 2D system: the origin first, then every positive root
/// of cx + d_E b_E/(d_E + h(x)) - (b_E - d_L) on (0, (b_E - d_L)/c), ascending in L.
std::vector<Equilibrium> find_steady_states(const ReducedParams& p, const HatchFunction& h,
                                            std::size_t subintervals = 1024);

/// Competition coefficient placing a steady state at L_bar. Throws
/// std::invalid_argument("target density not attainable") if none exists.
double calibrate_c(double b_E, double d_E, double d_L, const HatchFunction& h, double L_bar);

/// Trace/determinant classification of (E, L). Throws std::invalid_argument if
/// the point is neither the origin nor a steady state within 1e-8 relative.
Equilibrium classify(const ReducedParams& p, const HatchFunction& h, double E, double L);

/// Trace-zero and determinant-zero loci, as functions of k = h(L_bar).
struct StabilityThresholds {
    double b_E;
    double d_E;
    double d_L;
    double L_bar;
    double k_plus;
    double k_minus;
    double a_crit;

    [[nodiscard]] double T(double k) const;
    /// Throws std::domain_error when d_E = 0.
    [[nodiscard]] double D(double k) const;
    [[nodiscard]] bool D_available() const { return d_E > 0.0; }
};

StabilityThresholds thresholds(const ReducedParams& p, double L_bar);

struct UniquenessVerdict {
    bool unique;
    std::string reason;  // "concave-h", "slope-bound", "immortal-eggs" or "inconclusive"
};

/// Sufficient (not necessary) uniqueness test for the positive steady state.
UniquenessVerdict uniqueness_sufficient(const ReducedParams& p, const HatchFunction& h);

struct MetzlerCheck {
    bool stable;
    double inequality_margin;     // left side minus right side of the P(0) > 0 test
    double max_real_eigenvalue;   // of the 4x4 Jacobian
};

/// Stability test of a 4D equilibrium under decreasing hatching feedback.
/// Throws std::invalid_argument if h'(L) >= 0 or eq is not an equilibrium.
MetzlerCheck metzler_stability_4d(const StageParams& p, const HatchFunction& h, const State4& eq);

/// Eigenvalues of a dense n x n matrix given row-major.
std::vector<std::complex<double>> eigenvalues(std::span<const double> row_major, std::size_t n);

template <std::size_t N>
std::vector<std::complex<double>> eigenvalues(const Matrix<N>& m) {
    std::array<double, N * N> flat{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) flat[i * N + j] = m[i][j];
    return eigenvalues(flat, N);
}

}  // namespace hatchcycle
