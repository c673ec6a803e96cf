#include "weylcalc/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace weyl {

namespace {

std::size_t pow_size(int dim, std::size_t rank) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < rank; ++i) s *= static_cast<std::size_t>(dim);
  return s;
}

}  // namespace

Tensor::Tensor(int dim, std::vector<Variance> variance)
    : dim_(dim), variance_(std::move(variance)) {
  if (dim <= 0) throw TensorError("tensor dimension must be positive");
  data_.assign(pow_size(dim_, variance_.size()), 0.0);
}

double Tensor::value() const {
  if (rank() != 0) throw TensorError("value() requires a rank-0 tensor");
  return data_[0];
}

std::size_t Tensor::flat(const int* idx) const {
  std::size_t f = 0;
  for (int r = 0; r < rank(); ++r) {
    if (idx[r] < 0 || idx[r] >= dim_) throw TensorError("index out of range");
    f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx[r]);
  }
  return f;
}

void Tensor::unflat(std::size_t f, int* idx) const {
  for (int r = rank() - 1; r >= 0; --r) {
    idx[r] = static_cast<int>(f % static_cast<std::size_t>(dim_));
    f /= static_cast<std::size_t>(dim_);
  }
}

Tensor Tensor::contract(int a, int b) const {
  if (a == b || a < 0 || b < 0 || a >= rank() || b >= rank())
    throw TensorError("contract: invalid index positions");
  if (variance_[static_cast<std::size_t>(a)] ==
      variance_[static_cast<std::size_t>(b)])
    throw TensorError("contract: indices must have opposite variance");
  if (a > b) std::swap(a, b);

  std::vector<Variance> out_var;
  for (int r = 0; r < rank(); ++r)
    if (r != a && r != b) out_var.push_back(variance_[static_cast<std::size_t>(r)]);
  Tensor out(dim_, out_var);

  std::vector<int> oi(out_var.size()), fi(static_cast<std::size_t>(rank()));
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, oi.data());
    int w = 0;
    for (int r = 0; r < rank(); ++r)
      if (r != a && r != b) fi[static_cast<std::size_t>(r)] = oi[static_cast<std::size_t>(w++)];
    double sum = 0;
    for (int s = 0; s < dim_; ++s) {
      fi[static_cast<std::size_t>(a)] = s;
      fi[static_cast<std::size_t>(b)] = s;
      sum += data_[flat(fi.data())];
    }
    out[f] = sum;
  }
  return out;
}

Tensor Tensor::raise_lower(int pos, const Tensor& metric,
                           IndexMove direction) const {
  if (pos < 0 || pos >= rank())
    throw TensorError("raise_lower: index position out of range");
  if (metric.rank() != 2 || metric.dim() != dim_)
    throw TensorError("raise_lower: metric must be rank-2 of matching dimension");
  const Variance want_metric =
      direction == IndexMove::Raise ? Variance::Upper : Variance::Lower;
  if (metric.variance()[0] != want_metric || metric.variance()[1] != want_metric)
    throw TensorError("raise_lower: metric variance does not match direction");
  const Variance want_index =
      direction == IndexMove::Raise ? Variance::Lower : Variance::Upper;
  if (variance_[static_cast<std::size_t>(pos)] != want_index)
    throw TensorError("raise_lower: index already has the target variance");

  std::vector<Variance> out_var = variance_;
  out_var[static_cast<std::size_t>(pos)] =
      direction == IndexMove::Raise ? Variance::Upper : Variance::Lower;
  Tensor out(dim_, out_var);

  std::vector<int> idx(static_cast<std::size_t>(rank()));
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, idx.data());
    const int a = idx[static_cast<std::size_t>(pos)];
    double sum = 0;
    for (int s = 0; s < dim_; ++s) {
      idx[static_cast<std::size_t>(pos)] = s;
      sum += metric(a, s) * data_[flat(idx.data())];
    }
    idx[static_cast<std::size_t>(pos)] = a;
    out[f] = sum;
  }
  return out;
}

Tensor Tensor::transpose_pair(int a, int b) const {
  if (a < 0 || b < 0 || a >= rank() || b >= rank())
    throw TensorError("transpose_pair: invalid index positions");
  Tensor out(dim_, variance_);
  std::vector<int> idx(static_cast<std::size_t>(rank()));
  for (std::size_t f = 0; f < size(); ++f) {
    unflat(f, idx.data());
    std::swap(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    out[out.flat(idx.data())] = data_[f];
  }
  return out;
}

Tensor Tensor::antisymmetrize_pair(int a, int b) const {
  if (a == b) throw TensorError("antisymmetrize_pair: positions must differ");
  if (variance_[static_cast<std::size_t>(a)] !=
      variance_[static_cast<std::size_t>(b)])
    throw TensorError("antisymmetrize_pair: indices must have equal variance");
  // bracket convention: [ab] carries the 1/2
  return (*this - transpose_pair(a, b)) * 0.5;
}

Tensor Tensor::symmetrize_pair(int a, int b) const {
  if (a == b) throw TensorError("symmetrize_pair: positions must differ");
  if (variance_[static_cast<std::size_t>(a)] !=
      variance_[static_cast<std::size_t>(b)])
    throw TensorError("symmetrize_pair: indices must have equal variance");
  return (*this + transpose_pair(a, b)) * 0.5;
}

double Tensor::max_abs() const {
  double m = 0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor& Tensor::operator+=(const Tensor& o) {
  if (dim_ != o.dim_ || variance_ != o.variance_)
    throw TensorError("tensor addition: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  if (dim_ != o.dim_ || variance_ != o.variance_)
    throw TensorError("tensor subtraction: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor operator*(Tensor a, double s) {
  for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] *= s;
  return a;
}

Tensor outer_product(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim())
    throw TensorError("outer_product: dimension mismatch");
  std::vector<Variance> var = a.variance();
  var.insert(var.end(), b.variance().begin(), b.variance().end());
  Tensor out(a.dim(), var);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i * b.size() + j] = a[i] * b[j];
  return out;
}

Tensor kronecker_delta(int n) {
  Tensor d(n, {Variance::Upper, Variance::Lower});
  for (int i = 0; i < n; ++i) d(i, i) = 1.0;
  return d;
}

Tensor invert_metric(const Tensor& g) {
  if (g.rank() != 2) throw TensorError("invert_metric: rank-2 tensor required");
  if (g.variance()[0] != Variance::Lower || g.variance()[1] != Variance::Lower)
    throw TensorError("invert_metric: expected all-lower metric");
  const int n = g.dim();

  // augmented [g | I], partial pivoting
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(2 * n), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = g(i, j);
    a[i][static_cast<std::size_t>(n + i)] = 1.0;
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-12)
      throw SingularMetricError("metric is singular at the sample point");
    std::swap(a[static_cast<std::size_t>(c)], a[static_cast<std::size_t>(piv)]);
    const double d = a[c][c];
    for (int j = 0; j < 2 * n; ++j) a[c][j] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      if (f == 0.0) continue;
      for (int j = 0; j < 2 * n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  Tensor inv(n, {Variance::Upper, Variance::Upper});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = a[i][static_cast<std::size_t>(n + j)];
  return inv;
}

}  // namespace weyl
