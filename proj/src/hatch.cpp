#include "hatchcycle/hatch.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hatchcycle {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double logistic(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// Hill-shape pieces in terms of t = p log(L / lambda):
//   r/(1+r) and r/(1+r)^2 with r = (L/lambda)^p.
struct HillTerms {
    double frac;
    double w;
    double t;
};

HillTerms hill_terms(double L, double lambda, double p) {
    const double t = p * std::log(L / lambda);
    const double s = logistic(t);
    return {s, s * logistic(-t), t};
}

// d/dL of L^p/(lambda^p + L^p), including the L = 0 limits.
double hill_shape_d1(double L, double lambda, double p) {
    if (L <= 0.0) return p == 1.0 ? 1.0 / lambda : 0.0;
    const HillTerms ht = hill_terms(L, lambda, p);
    return p * ht.w / L;
}

double hill_shape_d2(double L, double lambda, double p) {
    if (L <= 0.0) {
        if (p == 1.0) return -2.0 / (lambda * lambda);
        if (p == 2.0) return 2.0 / (lambda * lambda);
        if (p < 2.0) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    const HillTerms ht = hill_terms(L, lambda, p);
    return p * ht.w / (L * L) * (-p * std::tanh(0.5 * ht.t) - 1.0);
}

double hill_shape(double L, double lambda, double p) {
    if (L <= 0.0) return 0.0;
    return hill_terms(L, lambda, p).frac;
}

}  // namespace

HatchFunction::HatchFunction(Family family) : family_(family) {
    std::visit(overloaded{
                   [](const Arctan& f) {
                       check(finite_all({f.a, f.b, f.L_ref}), "arctan: parameters must be finite");
                       check(f.a > 0.0, "arctan: a must be > 0");
                       check(f.b >= 0.0, "arctan: b must be >= 0");
                   },
                   [](const Hill& f) {
                       check(finite_all({f.h_m, f.a, f.lambda, f.p}), "hill: parameters must be finite");
                       check(f.h_m > 0.0, "hill: h_m must be > 0");
                       check(f.a >= 0.0, "hill: a must be >= 0");
                       check(f.lambda > 0.0, "hill: lambda must be > 0");
                       check(f.p >= 1.0, "hill: p must be >= 1");
                   },
                   [](const InverseHill& f) {
                       check(finite_all({f.h_m, f.a, f.lambda, f.p}),
                             "inverse_hill: parameters must be finite");
                       check(f.h_m > 0.0, "inverse_hill: h_m must be > 0");
                       check(f.a >= 0.0, "inverse_hill: a must be >= 0");
                       check(f.lambda > 0.0, "inverse_hill: lambda must be > 0");
                       check(f.p >= 1.0, "inverse_hill: p must be >= 1");
                   },
                   [](const Step& f) {
                       check(finite_all({f.h_m, f.a, f.threshold}), "step: parameters must be finite");
                       check(f.h_m > 0.0, "step: h_m must be > 0");
                       check(f.a >= 0.0, "step: a must be >= 0");
                       check(f.threshold > 0.0, "step: threshold must be > 0");
                   },
                   [](const Constant& f) {
                       check(std::isfinite(f.k) && f.k > 0.0, "constant: k must be finite and > 0");
                   },
               },
               family_);
}

double HatchFunction::value(double L) const {
    return std::visit(
        overloaded{
            [L](const Arctan& f) { return f.a * (std::atan(f.b * (L - f.L_ref)) + std::numbers::pi / 2); },
            [L](const Hill& f) { return f.h_m + f.a * hill_shape(L, f.lambda, f.p); },
            [L](const InverseHill& f) { return f.h_m + f.a * (1.0 - hill_shape(L, f.lambda, f.p)); },
            [L](const Step& f) {
                if (L < f.threshold) return f.h_m;
                if (L > f.threshold) return f.h_m + f.a;
                return f.h_m + 0.5 * f.a;
            },
            [](const Constant& f) { return f.k; },
        },
        family_);
}

double HatchFunction::derivative(double L) const {
    return std::visit(overloaded{
                          [L](const Arctan& f) {
                              const double z = f.b * (L - f.L_ref);
                              return f.a * f.b / (1.0 + z * z);
                          },
                          [L](const Hill& f) { return f.a * hill_shape_d1(L, f.lambda, f.p); },
                          [L](const InverseHill& f) { return -f.a * hill_shape_d1(L, f.lambda, f.p); },
                          [L](const Step& f) -> double {
                              if (L == f.threshold)
                                  throw std::domain_error("step: derivative undefined at threshold");
                              return 0.0;
                          },
                          [](const Constant&) { return 0.0; },
                      },
                      family_);
}

double HatchFunction::second_derivative(double L) const {
    return std::visit(overloaded{
                          [L](const Arctan& f) {
                              const double z = f.b * (L - f.L_ref);
                              const double q = 1.0 + z * z;
                              return -2.0 * f.a * f.b * f.b * z / (q * q);
                          },
                          [L](const Hill& f) { return f.a * hill_shape_d2(L, f.lambda, f.p); },
                          [L](const InverseHill& f) { return -f.a * hill_shape_d2(L, f.lambda, f.p); },
                          [](const Step&) -> double {
                              throw std::domain_error("step: no second derivative");
                          },
                          [](const Constant&) { return 0.0; },
                      },
                      family_);
}

double HatchFunction::supremum() const {
    return std::visit(overloaded{
                          [](const Arctan& f) { return f.a * std::numbers::pi; },
                          [](const Hill& f) { return f.h_m + f.a; },
                          [](const InverseHill& f) { return f.h_m + f.a; },
                          [](const Step& f) { return f.h_m + f.a; },
                          [](const Constant& f) { return f.k; },
                      },
                      family_);
}

Monotonicity HatchFunction::monotonicity() const {
    return std::visit(
        overloaded{
            [](const Arctan& f) { return f.b > 0 ? Monotonicity::Increasing : Monotonicity::Flat; },
            [](const Hill& f) { return f.a > 0 ? Monotonicity::Increasing : Monotonicity::Flat; },
            [](const InverseHill& f) { return f.a > 0 ? Monotonicity::Decreasing : Monotonicity::Flat; },
            [](const Step& f) { return f.a > 0 ? Monotonicity::Increasing : Monotonicity::Flat; },
            [](const Constant&) { return Monotonicity::Flat; },
        },
        family_);
}

std::string_view HatchFunction::family_name() const {
    return std::visit(overloaded{
                          [](const Arctan&) { return std::string_view("arctan"); },
                          [](const Hill&) { return std::string_view("hill"); },
                          [](const InverseHill&) { return std::string_view("inverse_hill"); },
                          [](const Step&) { return std::string_view("step"); },
                          [](const Constant&) { return std::string_view("constant"); },
                      },
                      family_);
}

void require_differentiable(const HatchFunction& h, std::string_view operation) {
    if (h.is_step()) {
        throw std::invalid_argument(std::string(operation) +
                                    ": step hatching functions have no usable derivative");
    }
}

}  // namespace hatchcycle
