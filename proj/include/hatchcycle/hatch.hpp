#pragma once

#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>

namespace hatchcycle {

/// h(L) = a (arctan(b (L - L_ref)) + pi/2). Increasing, sup = a pi.
struct Arctan {
    double a;
    double b;
    double L_ref;
};

/// h(L) = h_m + a L^p / (lambda^p + L^p). Increasing, sup = h_m + a.
struct Hill {
    double h_m;
    double a;
    double lambda;
    double p;
};

/// h(L) = h_m + a lambda^p / (lambda^p + L^p). Decreasing, sup = h_m + a.
struct InverseHill {
    double h_m;
    double a;
    double lambda;
    double p;
};

/// h_m below the threshold, h_m + a above it, h_m + a/2 exactly at it.
struct Step {
    double h_m;
    double a;
    double threshold;
};

struct Constant {
    double k;
};

enum class Monotonicity { Increasing, Decreasing, Flat };

/// Hatching rate as a function of larval density. Immutable; the family
/// parameters are validated on construction.
class HatchFunction {
public:
    using Family = std::variant<Arctan, Hill, InverseHill, Step, Constant>;

    HatchFunction(Family family);  // NOLINT(google-explicit-constructor)
    template <typename T>
        requires std::is_constructible_v<Family, T> && (!std::is_same_v<std::decay_t<T>, Family>)
    HatchFunction(T f)  // NOLINT(google-explicit-constructor)
        : HatchFunction(Family(std::move(f))) {}

    [[nodiscard]] double operator()(double L) const { return value(L); }
    [[nodiscard]] double value(double L) const;
    /// Throws std::domain_error for Step at its threshold.
    [[nodiscard]] double derivative(double L) const;
    /// Throws std::domain_error for Step.
    [[nodiscard]] double second_derivative(double L) const;
    /// sup over L >= 0.
    [[nodiscard]] double supremum() const;
    [[nodiscard]] Monotonicity monotonicity() const;
    [[nodiscard]] bool is_step() const { return std::holds_alternative<Step>(family_); }
    [[nodiscard]] bool is_smooth() const { return !is_step(); }
    [[nodiscard]] std::string_view family_name() const;

    [[nodiscard]] const Family& family() const { return family_; }

    template <typename T>
    [[nodiscard]] const T* as() const {
        return std::get_if<T>(&family_);
    }

private:
    Family family_;
};

/// Throws std::invalid_argument naming `operation` if h is a Step function.
void require_differentiable(const HatchFunction& h, std::string_view operation);

}  // namespace hatchcycle
