#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace curvhom {

/// Dense covariant tensor of fixed rank with every index running over 0..dim-1.
/// Storage is row-major: the last index varies fastest.
template <std::size_t Rank>
class DenseTensor {
 public:
  static constexpr std::size_t rank = Rank;

  DenseTensor() = default;
  explicit DenseTensor(int dim) : dim_(dim), data_(size_for(dim), 0.0) {}

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <typename... Idx>
  double& operator()(Idx... idx) {
    static_assert(sizeof...(Idx) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... Idx>
  double operator()(Idx... idx) const {
    static_assert(sizeof...(Idx) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  double& at(const std::array<int, Rank>& idx) { return data_[offset(idx)]; }
  double at(const std::array<int, Rank>& idx) const { return data_[offset(idx)]; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double squared_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return s;
  }

  /// Calls `fn(idx)` for every multi-index in storage order.
  template <typename Fn>
  void for_each_index(Fn&& fn) const {
    std::array<int, Rank> idx{};
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      fn(idx);
      for (int k = static_cast<int>(Rank) - 1; k >= 0; --k) {
        if (++idx[k] < dim_) break;
        idx[k] = 0;
      }
    }
  }

 private:
  static std::size_t size_for(int dim) {
    std::size_t n = 1;
    for (std::size_t k = 0; k < Rank; ++k) n *= static_cast<std::size_t>(dim);
    return n;
  }

  std::size_t offset(const std::array<int, Rank>& idx) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < Rank; ++k) {
      assert(idx[k] >= 0 && idx[k] < dim_);
      off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx[k]);
    }
    return off;
  }

  int dim_ = 0;
  std::vector<double> data_;
};

using Tensor3 = DenseTensor<3>;
using Tensor4 = DenseTensor<4>;
using Tensor5 = DenseTensor<5>;

template <std::size_t Rank>
double max_abs_diff(const DenseTensor<Rank>& a, const DenseTensor<Rank>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("tensor dimension mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  }
  return m;
}

/// Pulls a covariant tensor back along a linear map: the result is
/// T(M e_a, M e_b, ...) where column a of `m` holds the components of M e_a
/// in the frame of `t`. `m` is t.dim() x k; the result has dimension k.
/// Contracts one slot at a time, so the cost is O(k * n^Rank) per slot.
template <std::size_t Rank>
DenseTensor<Rank> pullback(const DenseTensor<Rank>& t, const Eigen::MatrixXd& m) {
  const int n = t.dim();
  if (m.rows() != n) throw std::invalid_argument("pullback: row count must equal tensor dimension");
  const int k = static_cast<int>(m.cols());

  // Slots 0..s-1 already transformed (extent k), slots s..Rank-1 not yet (extent n).
  std::vector<double> cur = t.data();
  std::array<int, Rank> extent;
  extent.fill(n);
  for (std::size_t s = 0; s < Rank; ++s) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t q = 0; q < s; ++q) outer *= static_cast<std::size_t>(extent[q]);
    for (std::size_t q = s + 1; q < Rank; ++q) inner *= static_cast<std::size_t>(extent[q]);
    std::vector<double> next(outer * static_cast<std::size_t>(k) * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
      for (int a = 0; a < k; ++a) {
        double* dst = &next[(o * k + a) * inner];
        for (int i = 0; i < n; ++i) {
          const double w = m(i, a);
          if (w == 0.0) continue;
          const double* src = &cur[(o * n + i) * inner];
          for (std::size_t r = 0; r < inner; ++r) dst[r] += w * src[r];
        }
      }
    }
    cur = std::move(next);
    extent[s] = k;
  }
  DenseTensor<Rank> out(k);
  out.data() = std::move(cur);
  return out;
}

/// Embeds a tensor on the first `t.dim()` coordinates of a `dim`-dimensional
/// space; every component with an index >= t.dim() is zero.
template <std::size_t Rank>
DenseTensor<Rank> extend_by_zero(const DenseTensor<Rank>& t, int dim) {
  DenseTensor<Rank> out(dim);
  t.for_each_index([&](const std::array<int, Rank>& idx) { out.at(idx) = t.at(idx); });
  return out;
}

/// Restriction to the leading `dim` coordinates.
template <std::size_t Rank>
DenseTensor<Rank> leading_block(const DenseTensor<Rank>& t, int dim) {
  DenseTensor<Rank> out(dim);
  out.for_each_index([&](const std::array<int, Rank>& idx) { out.at(idx) = t.at(idx); });
  return out;
}

}  // namespace curvhom
