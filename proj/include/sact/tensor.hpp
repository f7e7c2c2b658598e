#ifndef SACT_TENSOR_HPP
#define SACT_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sact/errors.hpp"

namespace sact {

// Dense row-major tensor of doubles. All numeric traffic in the library
// goes through this type; there are no strided views.
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), data_(count(shape_), 0.0) {}

  Tensor(std::vector<std::size_t> shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (count(shape_) != data_.size()) {
      throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                           " does not match shape product " +
                           std::to_string(count(shape_)));
    }
  }

  static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }

  static Tensor full(std::vector<std::size_t> shape, double value) {
    Tensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), value);
    return t;
  }

  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& at2(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double at2(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  std::string shape_str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
      if (i) os << ",";
      os << shape_[i];
    }
    os << ")";
    return os.str();
  }

  static std::size_t count(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

inline void require_rank(const Tensor& t, std::size_t r, const char* what) {
  if (t.rank() != r) {
    throw DimensionError(std::string(what) + ": expected rank " + std::to_string(r) +
                         ", got " + t.shape_str());
  }
}

// Standard matrix product of two rank-2 tensors.
inline Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul lhs");
  require_rank(b, 2, "matmul rhs");
  const std::size_t n = a.dim(0), k = a.dim(1), m = b.dim(1);
  if (k != b.dim(0)) {
    throw DimensionError("matmul: inner dimensions disagree, " + a.shape_str() +
                         " x " + b.shape_str());
  }
  Tensor out({n, m});
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      if (av == 0.0) continue;
      const double* brow = pb + p * m;
      double* orow = po + i * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += av * brow[j];
    }
  }
  return out;
}

inline Tensor transpose(const Tensor& a) {
  require_rank(a, 2, "transpose");
  const std::size_t n = a.dim(0), m = a.dim(1);
  Tensor out({m, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out[j * n + i] = a[i * m + j];
  return out;
}

// 2-D cross-correlation, NCHW input against OIHW kernels.
// Output spatial size = floor((H + 2p - kH) / s) + 1.
inline Tensor conv2d(const Tensor& input, const Tensor& kernels, int stride,
                     int padding) {
  require_rank(input, 4, "conv2d input");
  require_rank(kernels, 4, "conv2d kernels");
  if (stride < 1) throw DimensionError("conv2d: stride must be >= 1");
  if (padding < 0) throw DimensionError("conv2d: padding must be >= 0");
  const std::size_t n = input.dim(0), c = input.dim(1), h = input.dim(2), w = input.dim(3);
  const std::size_t o = kernels.dim(0), ci = kernels.dim(1), kh = kernels.dim(2),
                    kw = kernels.dim(3);
  if (c != ci) {
    throw DimensionError("conv2d: channel counts disagree, input " + input.shape_str() +
                         " vs kernels " + kernels.shape_str());
  }
  const long ph = static_cast<long>(h) + 2 * padding - static_cast<long>(kh);
  const long pw = static_cast<long>(w) + 2 * padding - static_cast<long>(kw);
  if (ph < 0 || pw < 0) {
    throw DimensionError("conv2d: kernel larger than padded input");
  }
  const std::size_t oh = static_cast<std::size_t>(ph / stride) + 1;
  const std::size_t ow = static_cast<std::size_t>(pw / stride) + 1;
  Tensor out({n, o, oh, ow});
  const double* pin = input.data();
  const double* pk = kernels.data();
  double* po = out.data();
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t f = 0; f < o; ++f) {
      for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
          double acc = 0.0;
          const long y0 = static_cast<long>(oy) * stride - padding;
          const long x0 = static_cast<long>(ox) * stride - padding;
          for (std::size_t ic = 0; ic < c; ++ic) {
            const double* plane = pin + ((b * c + ic) * h) * w;
            const double* kern = pk + ((f * c + ic) * kh) * kw;
            for (std::size_t ky = 0; ky < kh; ++ky) {
              const long iy = y0 + static_cast<long>(ky);
              if (iy < 0 || iy >= static_cast<long>(h)) continue;
              const double* row = plane + static_cast<std::size_t>(iy) * w;
              const double* krow = kern + ky * kw;
              for (std::size_t kx = 0; kx < kw; ++kx) {
                const long ix = x0 + static_cast<long>(kx);
                if (ix < 0 || ix >= static_cast<long>(w)) continue;
                acc += row[static_cast<std::size_t>(ix)] * krow[kx];
              }
            }
          }
          po[((b * o + f) * oh + oy) * ow + ox] = acc;
        }
      }
    }
  }
  return out;
}

// Max-shift stabilized softmax of a rank-1 tensor.
inline Tensor softmax(const Tensor& logits) {
  require_rank(logits, 1, "softmax");
  const std::size_t n = logits.size();
  if (n == 0) throw DimensionError("softmax: empty input");
  double mx = logits[0];
  for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
  Tensor out({n});
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
  return out;
}

struct CrossEntropyResult {
  double loss = 0.0;
  bool clamped = false;  // probs[label] hit the 1e-12 floor
};

inline CrossEntropyResult cross_entropy(const Tensor& probs, int label) {
  require_rank(probs, 1, "cross_entropy");
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
    throw ContractViolation("cross_entropy: label " + std::to_string(label) +
                            " out of range for " + probs.shape_str());
  }
  CrossEntropyResult r;
  double p = probs[static_cast<std::size_t>(label)];
  if (p <= 0.0) {
    p = 1e-12;
    r.clamped = true;
  }
  r.loss = -std::log(p);
  return r;
}

// Gradient of cross-entropy w.r.t. the logits when fused with softmax.
inline Tensor softmax_xent_grad(const Tensor& probs, int label) {
  require_rank(probs, 1, "softmax_xent_grad");
  Tensor g = probs;
  g[static_cast<std::size_t>(label)] -= 1.0;
  return g;
}

}  // namespace sact

#endif  // SACT_TENSOR_HPP
