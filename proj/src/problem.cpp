#include "semifit/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "semifit/transform.hpp"

namespace semifit {

Profile Profile::constant(double value) {
  Profile p;
  p.constant_ = value;
  return p;
}

Profile Profile::tabulated(std::vector<double> z, std::vector<double> values) {
  if (z.empty() || z.size() != values.size()) {
    throw std::invalid_argument("profile table: z and value columns must be non-empty and equal length");
  }
  for (std::size_t k = 1; k < z.size(); ++k) {
    if (!(z[k] > z[k - 1])) {
      throw std::invalid_argument("profile table: z must be strictly increasing");
    }
  }
  Profile p;
  p.z_ = std::move(z);
  p.values_ = std::move(values);
  p.constant_ = p.values_.front();
  return p;
}

double Profile::value(double z) const {
  if (z_.empty()) return constant_;
  if (z <= z_.front()) return values_.front();
  if (z >= z_.back()) return values_.back();
  const auto it = std::upper_bound(z_.begin(), z_.end(), z);
  const auto k = static_cast<std::size_t>(it - z_.begin());
  const double t = (z - z_[k - 1]) / (z_[k] - z_[k - 1]);
  return values_[k - 1] + t * (values_[k] - values_[k - 1]);
}

double Profile::slope(double z) const {
  if (z_.size() < 2) return 0.0;
  if (z < z_.front() || z >= z_.back()) return 0.0;
  const auto it = std::upper_bound(z_.begin(), z_.end(), z);
  const auto k = static_cast<std::size_t>(it - z_.begin());
  return (values_[k] - values_[k - 1]) / (z_[k] - z_[k - 1]);
}

double Profile::min_value() const {
  if (z_.empty()) return constant_;
  return *std::min_element(values_.begin(), values_.end());
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

bool Polynomial::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
}

ReactionNetwork ReactionNetwork::zero(int species_count) {
  ReactionNetwork net;
  net.species_count = species_count;
  net.gamma.assign(static_cast<std::size_t>(species_count * species_count), 0.0);
  return net;
}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "invalid problem:";
  for (const auto& s : v) os << "\n  - " << s;
  return os.str();
}

}  // namespace

ProblemError::ProblemError(std::vector<std::string> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations)) {}

PhysicalProblem validate_problem(PhysicalProblem p) {
  std::vector<std::string> errs;
  const int S = p.species_count();
  const auto& net = p.reactions;

  if (S < 1) errs.emplace_back("at least one species is required");
  if (net.species_count != S) {
    errs.push_back("dimension mismatch: " + std::to_string(S) + " species but reaction network has species_count " +
                   std::to_string(net.species_count));
  }
  if (net.gamma.size() != static_cast<std::size_t>(S) * static_cast<std::size_t>(S)) {
    errs.push_back("dimension mismatch: gamma has " + std::to_string(net.gamma.size()) + " entries, expected " +
                   std::to_string(S * S));
  }
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& b : net.beta) {
    if (b.s < 0 || b.s >= S || b.i < 0 || b.i >= S || b.j < 0 || b.j >= S) {
      errs.push_back("beta index out of range: (" + std::to_string(b.s + 1) + "," + std::to_string(b.i + 1) + "," +
                     std::to_string(b.j + 1) + ")");
      continue;
    }
    if (!seen.insert({b.s, b.i, b.j}).second) {
      errs.push_back("duplicate beta triplet (" + std::to_string(b.s + 1) + "," + std::to_string(b.i + 1) + "," +
                     std::to_string(b.j + 1) + ")");
    }
  }
  for (int s = 0; s < S; ++s) {
    const auto& sp = p.species[static_cast<std::size_t>(s)];
    const std::string tag = "species " + std::to_string(s + 1) + ": ";
    if (!(sp.K.min_value() > 0.0)) errs.push_back(tag + "non-positive diffusion K");
    if (!(sp.delta >= 0.0)) errs.push_back(tag + "negative delta");
    if (!(sp.z_star >= 0.0)) errs.push_back(tag + "negative source height z_star");
  }
  if (!(p.T > 0.0)) errs.emplace_back("final time T must be positive");
  if (!std::isfinite(p.w)) errs.emplace_back("wind w must be finite");

  if (!errs.empty()) throw ProblemError(std::move(errs));
  return p;
}

TransformedProblem::TransformedProblem(PhysicalProblem base, double a, bool include_jacobian_factor)
    : base_(std::move(base)), a_(a), include_jacobian_factor_(include_jacobian_factor) {
  if (!(a > 0.0)) throw std::invalid_argument("stretching factor a must be positive");
  xi_star_.reserve(base_.species.size());
  for (const auto& sp : base_.species) xi_star_.push_back(z_to_xi(a_, sp.z_star));
}

namespace {

double height_of(double a, double xi) {
  return xi >= 1.0 ? std::numeric_limits<double>::infinity() : xi_to_z(a, xi);
}

}  // namespace

double TransformedProblem::k(int s, double xi) const {
  return base_.species[static_cast<std::size_t>(s)].K.value(height_of(a_, xi));
}

double TransformedProblem::dK_dz(int s, double xi) const {
  return base_.species[static_cast<std::size_t>(s)].K.slope(height_of(a_, xi));
}

double TransformedProblem::dk_dxi(int s, double xi) const {
  const double slope = dK_dz(s, xi);
  if (slope == 0.0) return 0.0;
  return slope / (a_ * (1.0 - xi * xi));
}

double TransformedProblem::initial(int s, double xi) const {
  return base_.species[static_cast<std::size_t>(s)].c0.value(height_of(a_, xi));
}

double TransformedProblem::source_intensity(int s, double t) const {
  return base_.species[static_cast<std::size_t>(s)].Q(t);
}

TransformedProblem transform_problem(const PhysicalProblem& p, double a, bool include_jacobian_factor) {
  return TransformedProblem(validate_problem(p), a, include_jacobian_factor);
}

PhysicalProblem three_species_column() {
  PhysicalProblem p;
  p.w = 1.0;
  p.T = 1.0;

  SpeciesSpec s1;
  s1.K = Profile::constant(1.0);
  s1.Q = Polynomial{{0.0, 1.0}};
  s1.z_star = 20.0;
  SpeciesSpec s2;
  s2.K = Profile::constant(5.0);
  s2.Q = Polynomial{{1.0, -1.0}};
  s2.z_star = 85.0;
  SpeciesSpec s3;
  s3.K = Profile::constant(5.0);
  s3.Q = Polynomial{{0.0}};
  s3.c0 = Profile::constant(2.0);
  p.species = {s1, s2, s3};

  // R_s = gamma_{s,2} c_2 + beta_{s,1,3} c_1 c_3
  p.reactions = ReactionNetwork::zero(3);
  p.reactions.gamma[0 * 3 + 1] = 2000.0;
  p.reactions.gamma[1 * 3 + 1] = -2000.0;
  p.reactions.gamma[2 * 3 + 1] = 2000.0;
  p.reactions.beta = {{0, 0, 2, -1000.0}, {1, 0, 2, 1000.0}, {2, 0, 2, -1000.0}};
  return p;
}

}  // namespace semifit
