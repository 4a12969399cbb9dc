#pragma once

#include <stdexcept>
#include <vector>

namespace semifit {

/// Block-tridiagonal matrix with dense S x S diagonal blocks and diagonal
/// off-diagonal blocks. Block row i couples to rows i-1 and i+1 species-wise.
class BlockTridiagonal {
 public:
  BlockTridiagonal(int blocks, int block_size);

  int blocks() const { return blocks_; }
  int block_size() const { return size_; }
  int dimension() const { return blocks_ * size_; }

  /// Entry (r, c) of diagonal block i, row-major.
  double& diag(int i, int r, int c) { return diag_[dense_index(i, r, c)]; }
  double diag(int i, int r, int c) const { return diag_[dense_index(i, r, c)]; }
  /// Coupling of unknown (s, i) to (s, i-1); unused for i = 0.
  double& lower(int i, int s) { return lower_[vec_index(i, s)]; }
  double lower(int i, int s) const { return lower_[vec_index(i, s)]; }
  /// Coupling of unknown (s, i) to (s, i+1); unused for the last block.
  double& upper(int i, int s) { return upper_[vec_index(i, s)]; }
  double upper(int i, int s) const { return upper_[vec_index(i, s)]; }

  void set_zero();
  std::vector<double> multiply(const std::vector<double>& x) const;

 private:
  std::size_t dense_index(int i, int r, int c) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(r)) *
               static_cast<std::size_t>(size_) +
           static_cast<std::size_t>(c);
  }
  std::size_t vec_index(int i, int s) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(s);
  }

  int blocks_;
  int size_;
  std::vector<double> diag_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

class SingularBlockError : public std::runtime_error {
 public:
  SingularBlockError(int block, const std::string& what) : std::runtime_error(what), block_(block) {}
  /// Zero-based block (node) index whose pivot block was singular.
  int block() const { return block_; }

 private:
  int block_;
};

/// Block Thomas elimination. Throws SingularBlockError naming the node whose
/// eliminated diagonal block cannot be factored.
std::vector<double> solve_block_tridiagonal(const BlockTridiagonal& J, const std::vector<double>& rhs);

}  // namespace semifit
