#include "semifit/block_tridiagonal.hpp"

#include <Eigen/Dense>
#include <string>

namespace semifit {

BlockTridiagonal::BlockTridiagonal(int blocks, int block_size) : blocks_(blocks), size_(block_size) {
  if (blocks < 1 || block_size < 1) throw std::invalid_argument("BlockTridiagonal: empty shape");
  const auto n = static_cast<std::size_t>(blocks) * static_cast<std::size_t>(block_size);
  diag_.assign(n * static_cast<std::size_t>(block_size), 0.0);
  lower_.assign(n, 0.0);
  upper_.assign(n, 0.0);
}

void BlockTridiagonal::set_zero() {
  std::fill(diag_.begin(), diag_.end(), 0.0);
  std::fill(lower_.begin(), lower_.end(), 0.0);
  std::fill(upper_.begin(), upper_.end(), 0.0);
}

std::vector<double> BlockTridiagonal::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dimension()) throw std::invalid_argument("BlockTridiagonal::multiply: size");
  std::vector<double> y(x.size(), 0.0);
  for (int i = 0; i < blocks_; ++i) {
    for (int r = 0; r < size_; ++r) {
      double acc = 0.0;
      for (int c = 0; c < size_; ++c) acc += diag(i, r, c) * x[vec_index(i, c)];
      if (i > 0) acc += lower(i, r) * x[vec_index(i - 1, r)];
      if (i + 1 < blocks_) acc += upper(i, r) * x[vec_index(i + 1, r)];
      y[vec_index(i, r)] = acc;
    }
  }
  return y;
}

std::vector<double> solve_block_tridiagonal(const BlockTridiagonal& J, const std::vector<double>& rhs) {
  using Mat = Eigen::MatrixXd;
  using Vec = Eigen::VectorXd;
  const int n = J.blocks();
  const int S = J.block_size();
  if (static_cast<int>(rhs.size()) != J.dimension()) {
    throw std::invalid_argument("solve_block_tridiagonal: rhs size mismatch");
  }

  // Forward sweep: X_i = D'_i^{-1} diag(U_i), y_i = D'_i^{-1} r'_i.
  std::vector<Mat> X(static_cast<std::size_t>(n), Mat::Zero(S, S));
  std::vector<Vec> y(static_cast<std::size_t>(n), Vec::Zero(S));
  Mat D(S, S);
  Vec r(S);
  Eigen::PartialPivLU<Mat> lu(S);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < S; ++a) {
      for (int b = 0; b < S; ++b) D(a, b) = J.diag(i, a, b);
      r(a) = rhs[static_cast<std::size_t>(i * S + a)];
    }
    if (i > 0) {
      const auto& Xp = X[static_cast<std::size_t>(i - 1)];
      const auto& yp = y[static_cast<std::size_t>(i - 1)];
      for (int a = 0; a < S; ++a) {
        const double l = J.lower(i, a);
        if (l == 0.0) continue;
        D.row(a) -= l * Xp.row(a);
        r(a) -= l * yp(a);
      }
    }
    lu.compute(D);
    const double scale = D.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !(lu.rcond() > 1e-14)) {
      throw SingularBlockError(i, "solve_block_tridiagonal: singular diagonal block at node " + std::to_string(i + 1));
    }
    auto& Xi = X[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      Mat U = Mat::Zero(S, S);
      for (int a = 0; a < S; ++a) U(a, a) = J.upper(i, a);
      Xi = lu.solve(U);
    }
    y[static_cast<std::size_t>(i)] = lu.solve(r);
  }

  std::vector<double> x(rhs.size());
  Vec next = y[static_cast<std::size_t>(n - 1)];
  for (int a = 0; a < S; ++a) x[static_cast<std::size_t>((n - 1) * S + a)] = next(a);
  for (int i = n - 2; i >= 0; --i) {
    Vec cur = y[static_cast<std::size_t>(i)] - X[static_cast<std::size_t>(i)] * next;
    for (int a = 0; a < S; ++a) x[static_cast<std::size_t>(i * S + a)] = cur(a);
    next = std::move(cur);
  }
  return x;
}

}  // namespace semifit
