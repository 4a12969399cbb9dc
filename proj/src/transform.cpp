#include "semifit/transform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace semifit {

double z_to_xi(double a, double z) {
  if (!(a > 0.0)) throw std::invalid_argument("z_to_xi: stretching factor must be positive");
  if (z < 0.0) throw std::invalid_argument("z_to_xi: negative height " + std::to_string(z));
  return std::tanh(a * z);
}

double xi_to_z(double a, double xi) {
  if (!(a > 0.0)) throw std::invalid_argument("xi_to_z: stretching factor must be positive");
  if (xi < 0.0) throw std::invalid_argument("xi_to_z: xi < 0");
  if (xi >= 1.0) throw std::invalid_argument("xi_to_z: xi >= 1 maps to infinite height");
  return std::atanh(xi) / a;
}

CoefficientSample eval_coefficients(const TransformedProblem& tp, int s, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("eval_coefficients: xi outside [0,1]");
  if (s < 0 || s >= tp.species_count()) throw std::out_of_range("eval_coefficients: species index");

  const double a = tp.a();
  const double w = tp.w();
  const double k = tp.k(s, xi);
  const double one_m = 1.0 - xi * xi;
  const double a2k = a * a * k;

  CoefficientSample c;
  c.l = a2k;
  c.m = 2.0 * a2k * xi - a * w;
  c.lbar = a2k * (1.0 + xi);
  // (1 - xi^2) dk/dxi == dK/dz / a, so the xi-derivative term is 2 a xi dK/dz.
  c.d = 2.0 * a2k * (1.0 - 3.0 * xi * xi) + 2.0 * a * xi * tp.dK_dz(s, xi) + 2.0 * a * w * xi;
  c.p = a2k * one_m * one_m;
  c.q = a * one_m * (2.0 * a * xi * k - w);
  return c;
}

namespace {

void check_length(const ReactionNetwork& net, std::span<const double> c, const char* who) {
  if (static_cast<int>(c.size()) != net.species_count) {
    throw std::invalid_argument(std::string(who) + ": concentration vector has length " + std::to_string(c.size()) +
                                ", expected " + std::to_string(net.species_count));
  }
}

}  // namespace

std::vector<double> reaction_r(const ReactionNetwork& net, std::span<const double> c) {
  check_length(net, c, "reaction_r");
  const int S = net.species_count;
  std::vector<double> r(static_cast<std::size_t>(S), 0.0);
  for (int s = 0; s < S; ++s) {
    double acc = 0.0;
    for (int i = 0; i < S; ++i) acc += net.gamma_at(s, i) * c[static_cast<std::size_t>(i)];
    r[static_cast<std::size_t>(s)] = acc;
  }
  for (const auto& b : net.beta) {
    r[static_cast<std::size_t>(b.s)] += b.value * c[static_cast<std::size_t>(b.i)] * c[static_cast<std::size_t>(b.j)];
  }
  return r;
}

std::vector<double> reaction_jacobian(const ReactionNetwork& net, std::span<const double> c) {
  check_length(net, c, "reaction_jacobian");
  const auto S = static_cast<std::size_t>(net.species_count);
  std::vector<double> jac(net.gamma.begin(), net.gamma.end());
  for (const auto& b : net.beta) {
    const auto s = static_cast<std::size_t>(b.s);
    const auto i = static_cast<std::size_t>(b.i);
    const auto j = static_cast<std::size_t>(b.j);
    jac[s * S + i] += b.value * c[j];
    jac[s * S + j] += b.value * c[i];
  }
  return jac;
}

double b_eval(const TransformedProblem& tp, int s, double xi, std::span<const double> c) {
  const auto coef = eval_coefficients(tp, s, xi);
  const auto r = reaction_r(tp.base().reactions, c);
  return r[static_cast<std::size_t>(s)] - coef.d * c[static_cast<std::size_t>(s)];
}

}  // namespace semifit
