#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace weyl {

struct TensorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Variance { Upper, Lower };
enum class IndexMove { Raise, Lower };

/// Dense numeric tensor with per-index variance, row-major by index order.
/// Immutable in spirit: operations return new tensors; mutation is limited
/// to element fill during construction.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, std::vector<Variance> variance);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const { return variance_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[flat_of(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    return data_[flat_of(idx...)];
  }

  /// Value of a rank-0 tensor.
  double value() const;

  std::size_t flat(const int* idx) const;
  void unflat(std::size_t f, int* idx) const;

  Tensor contract(int a, int b) const;
  Tensor raise_lower(int pos, const Tensor& metric, IndexMove direction) const;
  Tensor antisymmetrize_pair(int a, int b) const;
  Tensor symmetrize_pair(int a, int b) const;
  Tensor transpose_pair(int a, int b) const;
  double max_abs() const;

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, double s);
  friend Tensor operator*(double s, Tensor a) { return std::move(a) * s; }

 private:
  template <typename... I>
  std::size_t flat_of(I... idx) const {
    const int ix[] = {static_cast<int>(idx)...};
    if (sizeof...(idx) != variance_.size())
      throw TensorError("index count does not match tensor rank");
    return flat(ix);
  }

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> data_;
};

Tensor outer_product(const Tensor& a, const Tensor& b);

/// Kronecker delta with variance (upper, lower).
Tensor kronecker_delta(int n);

/// Inverse of a rank-2 all-lower metric by Gaussian elimination with partial
/// pivoting; throws SingularMetricError if an absolute pivot drops below 1e-12.
Tensor invert_metric(const Tensor& g);

}  // namespace weyl
