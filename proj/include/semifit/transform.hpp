#pragma once

#include <span>
#include <vector>

#include "semifit/problem.hpp"

namespace semifit {

/// xi = (e^{2az} - 1)/(e^{2az} + 1) = tanh(az); saturates at 1 without overflow.
double z_to_xi(double a, double z);

/// z = ln((1 + xi)/(1 - xi)) / (2a) = atanh(xi)/a. Throws for xi >= 1 or xi < 0.
double xi_to_z(double a, double xi);

/// Transformed coefficients of one species at one point.
struct CoefficientSample {
  double l = 0.0;     // a^2 k
  double m = 0.0;     // 2 a^2 xi k - a w
  double lbar = 0.0;  // a^2 (1 + xi) k
  double d = 0.0;     // zeroth-order term of the divergence form
  double p = 0.0;     // a^2 (1 - xi^2)^2 k
  double q = 0.0;     // a (1 - xi^2)(2 a xi k - w)
};

CoefficientSample eval_coefficients(const TransformedProblem& tp, int s, double xi);

std::vector<double> reaction_r(const ReactionNetwork& net, std::span<const double> c);

/// Row-major S x S matrix dr_s/dC_r.
std::vector<double> reaction_jacobian(const ReactionNetwork& net, std::span<const double> c);

/// B_s(xi, C) = r_s(C) - d_s(xi) C_s.
double b_eval(const TransformedProblem& tp, int s, double xi, std::span<const double> c);

}  // namespace semifit
