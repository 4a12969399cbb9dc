#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semifit {

/// Height profile: either a constant or a table in z with piecewise-linear
/// interpolation and constant extrapolation outside the table.
class Profile {
 public:
  Profile() = default;

  static Profile constant(double value);
  static Profile tabulated(std::vector<double> z, std::vector<double> values);

  /// Accepts z = +inf (the image of xi = 1), returning the far-field value.
  double value(double z) const;
  /// Slope of the interpolant; zero outside the table and for constants.
  double slope(double z) const;

  bool is_constant() const { return z_.empty(); }
  /// Smallest value the profile takes anywhere on [0, inf).
  double min_value() const;

  const std::vector<double>& table_z() const { return z_; }
  const std::vector<double>& table_values() const { return values_; }

 private:
  double constant_ = 0.0;
  std::vector<double> z_;
  std::vector<double> values_;
};

/// Polynomial in time, coefficients in increasing degree.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double t) const;
  bool is_zero() const;
};

struct BilinearTerm {
  int s = 0;
  int i = 0;
  int j = 0;
  double value = 0.0;
};

/// r_s(C) = sum_i gamma(s,i) C_i + sum beta(s,i,j) C_i C_j, zero-based indices.
struct ReactionNetwork {
  int species_count = 0;
  std::vector<double> gamma;  // row-major S x S
  std::vector<BilinearTerm> beta;

  double gamma_at(int s, int i) const {
    return gamma[static_cast<std::size_t>(s * species_count + i)];
  }
  static ReactionNetwork zero(int species_count);
};

struct SpeciesSpec {
  Profile K = Profile::constant(1.0);
  double delta = 0.0;
  Polynomial Q;
  double z_star = 0.0;
  Profile c0 = Profile::constant(0.0);
};

struct PhysicalProblem {
  std::vector<SpeciesSpec> species;
  double w = 0.0;
  ReactionNetwork reactions;
  double T = 1.0;

  int species_count() const { return static_cast<int>(species.size()); }
};

/// Thrown by validate_problem; what() lists every violation found.
class ProblemError : public std::invalid_argument {
 public:
  explicit ProblemError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// The problem after the change of variables z -> xi on [0, 1).
class TransformedProblem {
 public:
  TransformedProblem(PhysicalProblem base, double a, bool include_jacobian_factor);

  double a() const { return a_; }
  const PhysicalProblem& base() const { return base_; }
  int species_count() const { return base_.species_count(); }
  double w() const { return base_.w; }
  double xi_star(int s) const { return xi_star_[static_cast<std::size_t>(s)]; }
  const std::vector<double>& xi_star() const { return xi_star_; }
  bool include_jacobian_factor() const { return include_jacobian_factor_; }

  /// k_s(xi) = K_s(z(xi)); at xi = 1 the far-field value.
  double k(int s, double xi) const;
  /// dK_s/dz evaluated at z(xi).
  double dK_dz(int s, double xi) const;
  /// dk_s/dxi; singular as xi -> 1 unless K is flat there.
  double dk_dxi(int s, double xi) const;
  double initial(int s, double xi) const;
  double source_intensity(int s, double t) const;

 private:
  PhysicalProblem base_;
  double a_;
  bool include_jacobian_factor_;
  std::vector<double> xi_star_;
};

PhysicalProblem validate_problem(PhysicalProblem p);

TransformedProblem transform_problem(const PhysicalProblem& p, double a,
                                     bool include_jacobian_factor = false);

/// The three-species vertical column used throughout the test suite and the
/// bundled `paper-s4` preset.
PhysicalProblem three_species_column();

}  // namespace semifit
