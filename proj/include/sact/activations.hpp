#ifndef SACT_ACTIVATIONS_HPP
#define SACT_ACTIVATIONS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sact/errors.hpp"
#include "sact/rng.hpp"
#include "sact/tensor.hpp"

namespace sact {

enum class ActivationKind {
  kReLU,
  kLeakyReLU,
  kELU,
  kPReLU,
  kSReLU,
  kAPLU,
  kMeLU_k4,
  kMeLU_k8,
  kGaLU_k4,
  kGaLU_k2,
  kPDELU,
  kSwishFixed,
  kSwishLearnable,
  kMishLearnable,
  kSRS,
  kSoftLearnableFixedBeta,
  kSoftLearnableLearnableBeta,
};

inline constexpr std::array<ActivationKind, 17> kAllActivationKinds = {
    ActivationKind::kReLU,
    ActivationKind::kLeakyReLU,
    ActivationKind::kELU,
    ActivationKind::kPReLU,
    ActivationKind::kSReLU,
    ActivationKind::kAPLU,
    ActivationKind::kMeLU_k4,
    ActivationKind::kMeLU_k8,
    ActivationKind::kGaLU_k4,
    ActivationKind::kGaLU_k2,
    ActivationKind::kPDELU,
    ActivationKind::kSwishFixed,
    ActivationKind::kSwishLearnable,
    ActivationKind::kMishLearnable,
    ActivationKind::kSRS,
    ActivationKind::kSoftLearnableFixedBeta,
    ActivationKind::kSoftLearnableLearnableBeta,
};

inline constexpr double kLeakySlope = 0.01;
inline constexpr double kEluAlpha = 1.0;
inline constexpr double kParamEpsilon = 1e-3;  // lower bound for constrained params
inline constexpr double kApluPenaltyWeight = 0.001;
inline constexpr int kApluHingeCount = 3;
inline constexpr double kPdeluDefaultT = 0.9;

// Stable lowercase identifier, used verbatim in configs and reports.
inline std::string_view kind_id(ActivationKind k) {
  switch (k) {
    case ActivationKind::kReLU: return "relu";
    case ActivationKind::kLeakyReLU: return "leaky_relu";
    case ActivationKind::kELU: return "elu";
    case ActivationKind::kPReLU: return "prelu";
    case ActivationKind::kSReLU: return "srelu";
    case ActivationKind::kAPLU: return "aplu";
    case ActivationKind::kMeLU_k4: return "melu_k4";
    case ActivationKind::kMeLU_k8: return "melu_k8";
    case ActivationKind::kGaLU_k4: return "galu_k4";
    case ActivationKind::kGaLU_k2: return "galu_k2";
    case ActivationKind::kPDELU: return "pdelu";
    case ActivationKind::kSwishFixed: return "swish_fixed";
    case ActivationKind::kSwishLearnable: return "swish_learnable";
    case ActivationKind::kMishLearnable: return "mish_learnable";
    case ActivationKind::kSRS: return "srs";
    case ActivationKind::kSoftLearnableFixedBeta: return "softlearnable";
    case ActivationKind::kSoftLearnableLearnableBeta: return "softlearnable2";
  }
  return "unknown";
}

// Accepts canonical ids plus the common aliases from the literature
// (wmelu = melu_k8, sgalu = galu_k2, swish = fixed-beta swish, ...).
inline std::optional<ActivationKind> kind_from_id(std::string_view id) {
  for (ActivationKind k : kAllActivationKinds) {
    if (id == kind_id(k)) return k;
  }
  if (id == "leakyrelu") return ActivationKind::kLeakyReLU;
  if (id == "melu") return ActivationKind::kMeLU_k4;
  if (id == "wmelu") return ActivationKind::kMeLU_k8;
  if (id == "galu") return ActivationKind::kGaLU_k4;
  if (id == "sgalu") return ActivationKind::kGaLU_k2;
  if (id == "swish") return ActivationKind::kSwishFixed;
  if (id == "swishlearnable") return ActivationKind::kSwishLearnable;
  if (id == "mish" || id == "learnablemish") return ActivationKind::kMishLearnable;
  if (id == "soft_learnable") return ActivationKind::kSoftLearnableFixedBeta;
  if (id == "soft_learnable2") return ActivationKind::kSoftLearnableLearnableBeta;
  return std::nullopt;
}

// "melu_k8_255" style code carrying kind + maxInput.
inline std::string kind_code(ActivationKind k, double max_input) {
  std::string s(kind_id(k));
  s += "_";
  s += std::to_string(static_cast<int>(max_input));
  return s;
}

inline bool kind_uses_max_input(ActivationKind k) {
  switch (k) {
    case ActivationKind::kSReLU:
    case ActivationKind::kAPLU:
    case ActivationKind::kMeLU_k4:
    case ActivationKind::kMeLU_k8:
    case ActivationKind::kGaLU_k4:
    case ActivationKind::kGaLU_k2:
      return true;
    default:
      return false;
  }
}

// Kinds whose learnable parameters are per input channel; the rest carry
// one scalar per layer.
inline bool kind_is_per_channel(ActivationKind k) {
  switch (k) {
    case ActivationKind::kPReLU:
    case ActivationKind::kSReLU:
    case ActivationKind::kAPLU:
    case ActivationKind::kMeLU_k4:
    case ActivationKind::kMeLU_k8:
    case ActivationKind::kGaLU_k4:
    case ActivationKind::kGaLU_k2:
    case ActivationKind::kPDELU:
      return true;
    default:
      return false;
  }
}

inline int melu_coeff_count(ActivationKind k) {
  switch (k) {
    case ActivationKind::kMeLU_k4: return 4;
    case ActivationKind::kMeLU_k8: return 8;
    case ActivationKind::kGaLU_k4: return 4;
    case ActivationKind::kGaLU_k2: return 2;
    default: return 0;
  }
}

struct HatEntry {
  double a;
  double lambda;
};

// Dyadic recursive partition of [0, 2*maxInput]; entry j scales by
// maxInput at evaluation time. k=8 uses all seven, k=4 the first three,
// k=2 the first one. Swappable without touching the activation code.
inline constexpr std::array<HatEntry, 7> kHatTable = {{
    {2.0, 2.0},
    {1.0, 1.0},
    {3.0, 1.0},
    {0.5, 0.5},
    {1.5, 0.5},
    {2.5, 0.5},
    {3.5, 0.5},
}};

// phi^{a,lambda}(x) = max(lambda*M - |x - a*M|, 0)
inline double mexican_hat(double x, double a, double lambda, double max_input) {
  return std::max(lambda * max_input - std::fabs(x - a * max_input), 0.0);
}

inline double mexican_hat_dx(double x, double a, double lambda, double max_input) {
  const double center = a * max_input;
  if (std::fabs(x - center) >= lambda * max_input) return 0.0;
  return x > center ? -1.0 : 1.0;
}

// Positive triangular lobe followed by a mirrored negative lobe.
inline double gaussian_hat(double x, double a, double lambda, double max_input) {
  const double m = max_input;
  const double up = std::max(lambda * m - std::fabs(x - a * m), 0.0);
  const double down = std::min(std::fabs(x - a * m - 2.0 * lambda * m) - lambda * m, 0.0);
  return up + down;
}

inline double gaussian_hat_dx(double x, double a, double lambda, double max_input) {
  const double m = max_input;
  double d = 0.0;
  const double c1 = a * m;
  if (std::fabs(x - c1) < lambda * m) d += (x > c1 ? -1.0 : 1.0);
  const double c2 = a * m + 2.0 * lambda * m;
  if (std::fabs(x - c2) < lambda * m) d += (x > c2 ? 1.0 : -1.0);
  return d;
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

// Kind tag + hyperparameters + learnable parameter values for one
// activation layer. Learnable tensors are (channels) or (channels, k);
// scalar-per-layer kinds use length-1 tensors.
struct ActivationParams {
  ActivationKind kind = ActivationKind::kReLU;
  double max_input = 1.0;
  int channels = 1;
  std::map<std::string, Tensor> learnable;
  std::map<std::string, double> fixed;  // pdelu: {"t", 0.9}

  const Tensor& p(const std::string& name) const {
    auto it = learnable.find(name);
    if (it == learnable.end()) {
      throw ContractViolation("activation parameter '" + name + "' missing for " +
                              std::string(kind_id(kind)));
    }
    return it->second;
  }
  double fixed_or(const std::string& name, double fallback) const {
    auto it = fixed.find(name);
    return it == fixed.end() ? fallback : it->second;
  }
};

inline ActivationParams act_init(ActivationKind kind, double max_input,
                                 int channels, Rng& rng) {
  if (max_input != 1.0 && max_input != 255.0) {
    throw ConfigurationError("maxInput must be 1 or 255, got " +
                             std::to_string(max_input));
  }
  if (channels < 1) throw ConfigurationError("channels must be >= 1");
  ActivationParams p;
  p.kind = kind;
  p.max_input = max_input;
  p.channels = channels;
  const std::size_t c = static_cast<std::size_t>(channels);
  switch (kind) {
    case ActivationKind::kReLU:
    case ActivationKind::kLeakyReLU:
    case ActivationKind::kELU:
      break;
    case ActivationKind::kPReLU:
      p.learnable["a"] = Tensor({c});
      break;
    case ActivationKind::kSReLU:
      p.learnable["al"] = Tensor({c});
      p.learnable["tl"] = Tensor({c});
      p.learnable["ar"] = Tensor::full({c}, 1.0);
      p.learnable["tr"] = Tensor::full({c}, max_input);
      break;
    case ActivationKind::kAPLU: {
      p.learnable["a"] = Tensor({c, static_cast<std::size_t>(kApluHingeCount)});
      Tensor b({c, static_cast<std::size_t>(kApluHingeCount)});
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng.uniform(0.0, max_input);
      p.learnable["b"] = std::move(b);
      break;
    }
    case ActivationKind::kMeLU_k4:
    case ActivationKind::kMeLU_k8:
    case ActivationKind::kGaLU_k4:
    case ActivationKind::kGaLU_k2:
      p.learnable["c"] =
          Tensor({c, static_cast<std::size_t>(melu_coeff_count(kind))});
      break;
    case ActivationKind::kPDELU:
      p.learnable["a"] = Tensor::full({c}, 1.0);
      p.fixed["t"] = kPdeluDefaultT;
      break;
    case ActivationKind::kSwishFixed:
      p.fixed["beta"] = 1.0;
      break;
    case ActivationKind::kSwishLearnable:
      p.learnable["beta"] = Tensor::full({1}, 1.0);
      break;
    case ActivationKind::kMishLearnable:
      p.learnable["alpha"] = Tensor::full({1}, 1.0);
      break;
    case ActivationKind::kSRS:
      p.learnable["alpha"] = Tensor::full({1}, 2.0);
      p.learnable["beta"] = Tensor::full({1}, 3.0);
      break;
    case ActivationKind::kSoftLearnableFixedBeta:
      p.learnable["alpha"] = Tensor::full({1}, 1.0);
      p.fixed["beta"] = 1.0;
      break;
    case ActivationKind::kSoftLearnableLearnableBeta:
      p.learnable["alpha"] = Tensor::full({1}, 1.0);
      p.learnable["beta"] = Tensor::full({1}, 1.0);
      break;
  }
  return p;
}

namespace detail {

// Scalar forward/backward for one element given the channel's parameters.
// The per-kind math lives here; tensor traversal is shared below.

struct SRSTerms {
  double f, dx, dalpha, dbeta;
};

inline SRSTerms srs_eval(double x, double alpha, double beta) {
  const double u = x / beta;
  if (u < -690.0) {
    // exp(-u) would overflow; the function and all gradients vanish here
    return {0.0, 0.0, 0.0, 0.0};
  }
  const double e = std::exp(-u);
  const double d = x / alpha + e;
  const double d2 = d * d;
  SRSTerms t;
  t.f = x / d;
  t.dx = e * (1.0 + u) / d2;
  t.dalpha = x * x / (alpha * alpha * d2);
  t.dbeta = -x * x * e / (beta * beta * d2);
  return t;
}

}  // namespace detail

// Index of the channel axis: axis 1 for rank >= 2 (NCHW and NC layouts),
// axis 0 for rank-1 vectors.
inline std::size_t channel_axis(const Tensor& x) { return x.rank() >= 2 ? 1 : 0; }

inline void check_channels(const ActivationParams& p, const Tensor& x) {
  if (kind_is_per_channel(p.kind)) {
    const std::size_t c = x.dim(channel_axis(x));
    if (c != static_cast<std::size_t>(p.channels)) {
      throw DimensionError("activation channel mismatch: params have " +
                           std::to_string(p.channels) + " channels, input is " +
                           x.shape_str());
    }
  }
}

namespace detail {

// Walks x as (outer, channels, inner) and calls fn(channel, flat_index).
template <typename Fn>
inline void for_each_channel(const Tensor& x, Fn&& fn) {
  const std::size_t axis = channel_axis(x);
  const std::size_t c = x.dim(axis);
  std::size_t outer = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= x.dim(i);
  const std::size_t inner = x.size() / (outer * c);
  std::size_t flat = 0;
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t i = 0; i < inner; ++i) {
        fn(ch, flat);
        ++flat;
      }
    }
  }
}

}  // namespace detail

inline Tensor act_forward(const ActivationParams& p, const Tensor& x) {
  check_channels(p, x);
  Tensor y(x.shape());
  const double m = p.max_input;
  switch (p.kind) {
    case ActivationKind::kReLU:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] >= 0.0 ? x[i] : 0.0;
      break;
    case ActivationKind::kLeakyReLU:
      for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x[i] >= 0.0 ? x[i] : kLeakySlope * x[i];
      break;
    case ActivationKind::kELU:
      for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x[i] >= 0.0 ? x[i] : kEluAlpha * std::expm1(x[i]);
      break;
    case ActivationKind::kPReLU: {
      const Tensor& a = p.p("a");
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        y[i] = x[i] >= 0.0 ? x[i] : a[ch] * x[i];
      });
      break;
    }
    case ActivationKind::kSReLU: {
      const Tensor& al = p.p("al");
      const Tensor& tl = p.p("tl");
      const Tensor& ar = p.p("ar");
      const Tensor& tr = p.p("tr");
      // affine pieces written as a*x + (1-a)*t so that the ReLU
      // initialization (a^r=1, a^l=0) reproduces x and 0 exactly
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        if (v < tl[ch])
          y[i] = al[ch] * v + (1.0 - al[ch]) * tl[ch];
        else if (v > tr[ch])
          y[i] = ar[ch] * v + (1.0 - ar[ch]) * tr[ch];
        else
          y[i] = v;
      });
      break;
    }
    case ActivationKind::kAPLU: {
      const Tensor& a = p.p("a");
      const Tensor& b = p.p("b");
      const std::size_t hinges = a.dim(1);
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        double acc = v >= 0.0 ? v : 0.0;
        for (std::size_t h = 0; h < hinges; ++h) {
          const double hinge = b.at2(ch, h) - v;
          if (hinge > 0.0) acc += a.at2(ch, h) * hinge;
        }
        y[i] = acc;
      });
      break;
    }
    case ActivationKind::kMeLU_k4:
    case ActivationKind::kMeLU_k8:
    case ActivationKind::kGaLU_k4:
    case ActivationKind::kGaLU_k2: {
      const Tensor& c = p.p("c");
      const std::size_t k = c.dim(1);
      const bool gauss = p.kind == ActivationKind::kGaLU_k4 ||
                         p.kind == ActivationKind::kGaLU_k2;
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        double acc = v >= 0.0 ? v : c.at2(ch, 0) * v;
        for (std::size_t j = 1; j < k; ++j) {
          const double cj = c.at2(ch, j);
          if (cj == 0.0) continue;
          const HatEntry& e = kHatTable[j - 1];
          acc += cj * (gauss ? gaussian_hat(v, e.a, e.lambda, m)
                             : mexican_hat(v, e.a, e.lambda, m));
        }
        y[i] = acc;
      });
      break;
    }
    case ActivationKind::kPDELU: {
      const Tensor& a = p.p("a");
      const double t = p.fixed_or("t", kPdeluDefaultT);
      const double inv = 1.0 / (1.0 - t);
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        if (v > 0.0) {
          y[i] = v;
        } else {
          const double z = std::max(1.0 + (1.0 - t) * v, 0.0);
          y[i] = a[ch] * (std::pow(z, inv) - 1.0);
        }
      });
      break;
    }
    case ActivationKind::kSwishFixed:
    case ActivationKind::kSwishLearnable: {
      const double beta = p.kind == ActivationKind::kSwishFixed
                              ? p.fixed_or("beta", 1.0)
                              : p.p("beta")[0];
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * sigmoid(beta * x[i]);
      break;
    }
    case ActivationKind::kMishLearnable: {
      const double alpha = p.p("alpha")[0];
      for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x[i] * std::tanh(softplus(alpha * x[i]));
      break;
    }
    case ActivationKind::kSRS: {
      const double alpha = p.p("alpha")[0];
      const double beta = p.p("beta")[0];
      for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = detail::srs_eval(x[i], alpha, beta).f;
      break;
    }
    case ActivationKind::kSoftLearnableFixedBeta:
    case ActivationKind::kSoftLearnableLearnableBeta: {
      const double alpha = p.p("alpha")[0];
      const double beta = p.kind == ActivationKind::kSoftLearnableFixedBeta
                              ? p.fixed_or("beta", 1.0)
                              : p.p("beta")[0];
      constexpr double kLn2 = 0.6931471805599453094;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        y[i] = v > 0.0 ? v : alpha * (softplus(beta * v) - kLn2);
      }
      break;
    }
  }
  return y;
}

// upstream (.) dy/dx, elementwise with the kind's analytic derivative.
inline Tensor act_backward_input(const ActivationParams& p, const Tensor& x,
                                 const Tensor& upstream) {
  check_channels(p, x);
  if (!x.same_shape(upstream)) {
    throw DimensionError("act_backward_input: x " + x.shape_str() +
                         " vs upstream " + upstream.shape_str());
  }
  Tensor g(x.shape());
  const double m = p.max_input;
  switch (p.kind) {
    case ActivationKind::kReLU:
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = x[i] >= 0.0 ? upstream[i] : 0.0;
      break;
    case ActivationKind::kLeakyReLU:
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = x[i] >= 0.0 ? upstream[i] : kLeakySlope * upstream[i];
      break;
    case ActivationKind::kELU:
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = x[i] >= 0.0 ? upstream[i] : kEluAlpha * std::exp(x[i]) * upstream[i];
      break;
    case ActivationKind::kPReLU: {
      const Tensor& a = p.p("a");
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        g[i] = x[i] >= 0.0 ? upstream[i] : a[ch] * upstream[i];
      });
      break;
    }
    case ActivationKind::kSReLU: {
      const Tensor& al = p.p("al");
      const Tensor& tl = p.p("tl");
      const Tensor& ar = p.p("ar");
      const Tensor& tr = p.p("tr");
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        double d = 1.0;
        if (v < tl[ch])
          d = al[ch];
        else if (v > tr[ch])
          d = ar[ch];
        g[i] = d * upstream[i];
      });
      break;
    }
    case ActivationKind::kAPLU: {
      const Tensor& a = p.p("a");
      const Tensor& b = p.p("b");
      const std::size_t hinges = a.dim(1);
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        double d = v >= 0.0 ? 1.0 : 0.0;
        for (std::size_t h = 0; h < hinges; ++h) {
          if (v < b.at2(ch, h)) d -= a.at2(ch, h);
        }
        g[i] = d * upstream[i];
      });
      break;
    }
    case ActivationKind::kMeLU_k4:
    case ActivationKind::kMeLU_k8:
    case ActivationKind::kGaLU_k4:
    case ActivationKind::kGaLU_k2: {
      const Tensor& c = p.p("c");
      const std::size_t k = c.dim(1);
      const bool gauss = p.kind == ActivationKind::kGaLU_k4 ||
                         p.kind == ActivationKind::kGaLU_k2;
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        double d = v >= 0.0 ? 1.0 : c.at2(ch, 0);
        for (std::size_t j = 1; j < k; ++j) {
          const double cj = c.at2(ch, j);
          if (cj == 0.0) continue;
          const HatEntry& e = kHatTable[j - 1];
          d += cj * (gauss ? gaussian_hat_dx(v, e.a, e.lambda, m)
                           : mexican_hat_dx(v, e.a, e.lambda, m));
        }
        g[i] = d * upstream[i];
      });
      break;
    }
    case ActivationKind::kPDELU: {
      const Tensor& a = p.p("a");
      const double t = p.fixed_or("t", kPdeluDefaultT);
      const double expo = t / (1.0 - t);
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        if (v > 0.0) {
          g[i] = upstream[i];
        } else {
          const double z = 1.0 + (1.0 - t) * v;
          g[i] = z > 0.0 ? a[ch] * std::pow(z, expo) * upstream[i] : 0.0;
        }
      });
      break;
    }
    case ActivationKind::kSwishFixed:
    case ActivationKind::kSwishLearnable: {
      const double beta = p.kind == ActivationKind::kSwishFixed
                              ? p.fixed_or("beta", 1.0)
                              : p.p("beta")[0];
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = sigmoid(beta * x[i]);
        g[i] = (s + beta * x[i] * s * (1.0 - s)) * upstream[i];
      }
      break;
    }
    case ActivationKind::kMishLearnable: {
      const double alpha = p.p("alpha")[0];
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        const double th = std::tanh(softplus(alpha * v));
        const double d = th + v * (1.0 - th * th) * alpha * sigmoid(alpha * v);
        g[i] = d * upstream[i];
      }
      break;
    }
    case ActivationKind::kSRS: {
      const double alpha = p.p("alpha")[0];
      const double beta = p.p("beta")[0];
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = detail::srs_eval(x[i], alpha, beta).dx * upstream[i];
      break;
    }
    case ActivationKind::kSoftLearnableFixedBeta:
    case ActivationKind::kSoftLearnableLearnableBeta: {
      const double alpha = p.p("alpha")[0];
      const double beta = p.kind == ActivationKind::kSoftLearnableFixedBeta
                              ? p.fixed_or("beta", 1.0)
                              : p.p("beta")[0];
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        g[i] = v > 0.0 ? upstream[i]
                       : alpha * beta * sigmoid(beta * v) * upstream[i];
      }
      break;
    }
  }
  return g;
}

// Sum over elements (per channel where applicable) of upstream (.) dy/dtheta.
// Kinds without learnable parameters return an empty map.
inline std::map<std::string, Tensor> act_backward_params(
    const ActivationParams& p, const Tensor& x, const Tensor& upstream) {
  check_channels(p, x);
  if (!x.same_shape(upstream)) {
    throw DimensionError("act_backward_params: x " + x.shape_str() +
                         " vs upstream " + upstream.shape_str());
  }
  std::map<std::string, Tensor> grads;
  const double m = p.max_input;
  switch (p.kind) {
    case ActivationKind::kReLU:
    case ActivationKind::kLeakyReLU:
    case ActivationKind::kELU:
    case ActivationKind::kSwishFixed:
      break;  // no learnable parameters
    case ActivationKind::kPReLU: {
      Tensor ga(p.p("a").shape());
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        if (x[i] < 0.0) ga[ch] += x[i] * upstream[i];
      });
      grads["a"] = std::move(ga);
      break;
    }
    case ActivationKind::kSReLU: {
      const Tensor& al = p.p("al");
      const Tensor& tl = p.p("tl");
      const Tensor& ar = p.p("ar");
      const Tensor& tr = p.p("tr");
      Tensor gal(al.shape()), gtl(tl.shape()), gar(ar.shape()), gtr(tr.shape());
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        if (v < tl[ch]) {
          gal[ch] += (v - tl[ch]) * upstream[i];
          gtl[ch] += (1.0 - al[ch]) * upstream[i];
        } else if (v > tr[ch]) {
          gar[ch] += (v - tr[ch]) * upstream[i];
          gtr[ch] += (1.0 - ar[ch]) * upstream[i];
        }
      });
      grads["al"] = std::move(gal);
      grads["tl"] = std::move(gtl);
      grads["ar"] = std::move(gar);
      grads["tr"] = std::move(gtr);
      break;
    }
    case ActivationKind::kAPLU: {
      const Tensor& a = p.p("a");
      const Tensor& b = p.p("b");
      const std::size_t hinges = a.dim(1);
      Tensor ga(a.shape()), gb(b.shape());
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        for (std::size_t h = 0; h < hinges; ++h) {
          if (v < b.at2(ch, h)) {
            ga.at2(ch, h) += (b.at2(ch, h) - v) * upstream[i];
            gb.at2(ch, h) += a.at2(ch, h) * upstream[i];
          }
        }
      });
      grads["a"] = std::move(ga);
      grads["b"] = std::move(gb);
      break;
    }
    case ActivationKind::kMeLU_k4:
    case ActivationKind::kMeLU_k8:
    case ActivationKind::kGaLU_k4:
    case ActivationKind::kGaLU_k2: {
      const Tensor& c = p.p("c");
      const std::size_t k = c.dim(1);
      const bool gauss = p.kind == ActivationKind::kGaLU_k4 ||
                         p.kind == ActivationKind::kGaLU_k2;
      Tensor gc(c.shape());
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        if (v < 0.0) gc.at2(ch, 0) += v * upstream[i];
        for (std::size_t j = 1; j < k; ++j) {
          const HatEntry& e = kHatTable[j - 1];
          const double phi = gauss ? gaussian_hat(v, e.a, e.lambda, m)
                                   : mexican_hat(v, e.a, e.lambda, m);
          if (phi != 0.0) gc.at2(ch, j) += phi * upstream[i];
        }
      });
      grads["c"] = std::move(gc);
      break;
    }
    case ActivationKind::kPDELU: {
      const Tensor& a = p.p("a");
      const double t = p.fixed_or("t", kPdeluDefaultT);
      const double inv = 1.0 / (1.0 - t);
      Tensor ga(a.shape());
      detail::for_each_channel(x, [&](std::size_t ch, std::size_t i) {
        const double v = x[i];
        if (v <= 0.0) {
          const double z = std::max(1.0 + (1.0 - t) * v, 0.0);
          ga[ch] += (std::pow(z, inv) - 1.0) * upstream[i];
        }
      });
      grads["a"] = std::move(ga);
      break;
    }
    case ActivationKind::kSwishLearnable: {
      const double beta = p.p("beta")[0];
      Tensor gb({1});
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = sigmoid(beta * x[i]);
        gb[0] += x[i] * x[i] * s * (1.0 - s) * upstream[i];
      }
      grads["beta"] = std::move(gb);
      break;
    }
    case ActivationKind::kMishLearnable: {
      const double alpha = p.p("alpha")[0];
      Tensor ga({1});
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        const double th = std::tanh(softplus(alpha * v));
        ga[0] += v * v * (1.0 - th * th) * sigmoid(alpha * v) * upstream[i];
      }
      grads["alpha"] = std::move(ga);
      break;
    }
    case ActivationKind::kSRS: {
      const double alpha = p.p("alpha")[0];
      const double beta = p.p("beta")[0];
      Tensor ga({1}), gb({1});
      for (std::size_t i = 0; i < x.size(); ++i) {
        const auto terms = detail::srs_eval(x[i], alpha, beta);
        ga[0] += terms.dalpha * upstream[i];
        gb[0] += terms.dbeta * upstream[i];
      }
      grads["alpha"] = std::move(ga);
      grads["beta"] = std::move(gb);
      break;
    }
    case ActivationKind::kSoftLearnableFixedBeta: {
      const double beta = p.fixed_or("beta", 1.0);
      constexpr double kLn2 = 0.6931471805599453094;
      Tensor ga({1});
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        if (v <= 0.0) ga[0] += (softplus(beta * v) - kLn2) * upstream[i];
      }
      grads["alpha"] = std::move(ga);
      break;
    }
    case ActivationKind::kSoftLearnableLearnableBeta: {
      const double alpha = p.p("alpha")[0];
      const double beta = p.p("beta")[0];
      constexpr double kLn2 = 0.6931471805599453094;
      Tensor ga({1}), gb({1});
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        if (v <= 0.0) {
          ga[0] += (softplus(beta * v) - kLn2) * upstream[i];
          gb[0] += alpha * v * sigmoid(beta * v) * upstream[i];
        }
      }
      grads["alpha"] = std::move(ga);
      grads["beta"] = std::move(gb);
      break;
    }
  }
  return grads;
}

// 0.001 * ||a||^2 for APLU, 0 otherwise. Pure; no clamping.
inline double constraint_penalty(const ActivationParams& p) {
  if (p.kind != ActivationKind::kAPLU) return 0.0;
  const Tensor& a = p.p("a");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i];
  return kApluPenaltyWeight * s;
}

// Adds the APLU penalty gradient 0.002 * a_c to the parameter gradients.
inline void add_constraint_gradient(const ActivationParams& p,
                                    std::map<std::string, Tensor>& grads) {
  if (p.kind != ActivationKind::kAPLU) return;
  const Tensor& a = p.p("a");
  Tensor& ga = grads["a"];
  if (ga.size() != a.size()) ga = Tensor(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) ga[i] += 2.0 * kApluPenaltyWeight * a[i];
}

// Clamps constrained parameters (SRS and SoftLearnable stay >= 1e-3) and
// returns the APLU penalty value. Called after each optimizer step.
inline double apply_constraints(ActivationParams& p) {
  switch (p.kind) {
    case ActivationKind::kSRS:
    case ActivationKind::kSoftLearnableFixedBeta:
    case ActivationKind::kSoftLearnableLearnableBeta:
      for (auto& [name, tensor] : p.learnable) {
        for (std::size_t i = 0; i < tensor.size(); ++i)
          tensor[i] = std::max(tensor[i], kParamEpsilon);
      }
      return 0.0;
    case ActivationKind::kAPLU:
      return constraint_penalty(p);
    default:
      return 0.0;
  }
}

// Locations where the function is not differentiable for the given
// channel; gradient checks exclude neighborhoods of these.
inline std::vector<double> activation_kinks(const ActivationParams& p,
                                            std::size_t channel) {
  std::vector<double> kinks;
  const double m = p.max_input;
  switch (p.kind) {
    case ActivationKind::kReLU:
    case ActivationKind::kLeakyReLU:
    case ActivationKind::kELU:
    case ActivationKind::kPReLU:
    case ActivationKind::kSoftLearnableFixedBeta:
    case ActivationKind::kSoftLearnableLearnableBeta:
      kinks.push_back(0.0);
      break;
    case ActivationKind::kSReLU:
      kinks.push_back(p.p("tl")[channel]);
      kinks.push_back(p.p("tr")[channel]);
      break;
    case ActivationKind::kAPLU: {
      kinks.push_back(0.0);
      const Tensor& b = p.p("b");
      for (std::size_t h = 0; h < b.dim(1); ++h) kinks.push_back(b.at2(channel, h));
      break;
    }
    case ActivationKind::kMeLU_k4:
    case ActivationKind::kMeLU_k8:
    case ActivationKind::kGaLU_k4:
    case ActivationKind::kGaLU_k2: {
      kinks.push_back(0.0);
      const bool gauss = p.kind == ActivationKind::kGaLU_k4 ||
                         p.kind == ActivationKind::kGaLU_k2;
      const int k = melu_coeff_count(p.kind);
      for (int j = 1; j < k; ++j) {
        const HatEntry& e = kHatTable[j - 1];
        const double c = e.a * m, w = e.lambda * m;
        kinks.push_back(c - w);
        kinks.push_back(c);
        kinks.push_back(c + w);
        if (gauss) {
          kinks.push_back(c + 2.0 * w);
          kinks.push_back(c + 3.0 * w);
        }
      }
      break;
    }
    case ActivationKind::kPDELU: {
      kinks.push_back(0.0);
      const double t = p.fixed_or("t", kPdeluDefaultT);
      kinks.push_back(-1.0 / (1.0 - t));
      break;
    }
    case ActivationKind::kSwishFixed:
    case ActivationKind::kSwishLearnable:
    case ActivationKind::kMishLearnable:
    case ActivationKind::kSRS:
      break;  // smooth everywhere
  }
  return kinks;
}

}  // namespace sact

#endif  // SACT_ACTIVATIONS_HPP
