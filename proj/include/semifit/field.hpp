#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace semifit {

/// Concentrations C_{s,i} on all N+1 nodes, node-major: the S species of a
/// node are contiguous, which is also the Newton unknown ordering.
class Field {
 public:
  Field() = default;
  Field(int species, int nodes, double value = 0.0)
      : species_(species), nodes_(nodes), data_(static_cast<std::size_t>(species) * static_cast<std::size_t>(nodes), value) {
    if (species < 1 || nodes < 1) throw std::invalid_argument("Field: empty shape");
  }

  int species() const { return species_; }
  int nodes() const { return nodes_; }

  double& operator()(int s, int i) { return data_[index(s, i)]; }
  double operator()(int s, int i) const { return data_[index(s, i)]; }

  std::span<const double> at_node(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(species_),
            static_cast<std::size_t>(species_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Field& o) const { return species_ == o.species_ && nodes_ == o.nodes_; }

  double min() const;
  double max_abs() const;

 private:
  std::size_t index(int s, int i) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(species_) + static_cast<std::size_t>(s);
  }

  int species_ = 0;
  int nodes_ = 0;
  std::vector<double> data_;
};

inline double Field::min() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

inline double Field::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace semifit
