#ifndef SACT_FIDELITY_HPP
#define SACT_FIDELITY_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sact/activations.hpp"
#include "sact/gradcheck.hpp"
#include "sact/rng.hpp"
#include "sact/tensor.hpp"

namespace sact {

// Validates every analytic gradient in the activation zoo against the
// central-difference oracle. Sample points inside a kink neighborhood are
// excluded: central differences are invalid across non-differentiable
// points. The exclusion radius is max(kink_delta, 2h) since the oracle
// itself steps h = h_scale * max(1, |x|).
struct FidelityOptions {
  int min_input_points = 1000;
  int param_configs = 200;
  double tol = 1e-4;
  double kink_delta = 1e-3;
  double h_scale = 1e-4;
  // absolute floor: near-zero gradients carry O(h^2) oracle noise that a
  // pure relative test would amplify
  double abs_floor = 1e-7;
  int channels = 2;
  std::uint64_t seed = 1;
};

struct FidelityReport {
  std::string variant;
  double max_input = 1.0;
  int input_points = 0;
  int param_points = 0;
  double worst_input_err = 0.0;  // |a-b| / (max(|a|,|b|) + floor)
  double worst_param_err = 0.0;
  bool pass = true;
};

namespace detail {

inline bool near_any(double v, const std::vector<double>& points, double radius) {
  for (double p : points) {
    if (std::fabs(v - p) <= radius) return true;
  }
  return false;
}

inline double rel_err(double a, double b, double floor) {
  return std::fabs(a - b) / (std::max(std::fabs(a), std::fabs(b)) + floor);
}

// Randomizes learnable parameters inside ranges where the function stays
// well-behaved (SRS in particular must keep beta < e * alpha).
inline void randomize_params(ActivationParams& p, Rng& rng) {
  const double m = p.max_input;
  switch (p.kind) {
    case ActivationKind::kPReLU:
      for (auto& v : p.learnable["a"].values()) v = rng.uniform(-0.5, 0.5);
      break;
    case ActivationKind::kSReLU:
      for (auto& v : p.learnable["al"].values()) v = rng.uniform(-0.5, 1.5);
      for (auto& v : p.learnable["ar"].values()) v = rng.uniform(-0.5, 1.5);
      for (auto& v : p.learnable["tl"].values()) v = rng.uniform(-0.5 * m, 0.3 * m);
      for (auto& v : p.learnable["tr"].values()) v = rng.uniform(0.4 * m, 1.5 * m);
      break;
    case ActivationKind::kAPLU:
      for (auto& v : p.learnable["a"].values()) v = rng.uniform(-0.5, 0.5);
      for (auto& v : p.learnable["b"].values()) v = rng.uniform(0.0, m);
      break;
    case ActivationKind::kMeLU_k4:
    case ActivationKind::kMeLU_k8:
    case ActivationKind::kGaLU_k4:
    case ActivationKind::kGaLU_k2:
      for (auto& v : p.learnable["c"].values()) v = rng.uniform(-1.0, 1.0);
      break;
    case ActivationKind::kPDELU:
      for (auto& v : p.learnable["a"].values()) v = rng.uniform(0.5, 1.5);
      break;
    case ActivationKind::kSwishLearnable:
      p.learnable["beta"][0] = rng.uniform(0.5, 2.0);
      break;
    case ActivationKind::kMishLearnable:
      p.learnable["alpha"][0] = rng.uniform(0.5, 2.0);
      break;
    case ActivationKind::kSRS:
      p.learnable["alpha"][0] = rng.uniform(1.5, 3.0);
      p.learnable["beta"][0] = rng.uniform(1.0, 3.0);
      break;
    case ActivationKind::kSoftLearnableFixedBeta:
      p.learnable["alpha"][0] = rng.uniform(0.5, 2.0);
      break;
    case ActivationKind::kSoftLearnableLearnableBeta:
      p.learnable["alpha"][0] = rng.uniform(0.5, 2.0);
      p.learnable["beta"][0] = rng.uniform(0.5, 2.0);
      break;
    default:
      break;
  }
}

}  // namespace detail

inline FidelityReport check_activation_gradients(ActivationKind kind,
                                                 double max_input,
                                                 const FidelityOptions& opt = {}) {
  FidelityReport rep;
  rep.variant = kind_code(kind, max_input);
  rep.max_input = max_input;
  Rng rng(derive_seed(opt.seed, rep.variant));
  const double m = max_input;
  const std::size_t c = static_cast<std::size_t>(opt.channels);
  const std::vector<std::size_t> shape{1, c, 5, 5};
  const std::size_t n = Tensor::count(shape);
  const std::size_t inner = n / c;  // elements per channel block

  // --- input gradients ---
  while (rep.input_points < opt.min_input_points) {
    ActivationParams params = act_init(kind, max_input, opt.channels, rng);
    detail::randomize_params(params, rng);
    Tensor x(shape), up(shape);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-3.0 * m, 3.0 * m);
      up[i] = rng.uniform(0.5, 1.5);
    }
    Tensor analytic = act_backward_input(params, x, up);
    auto f = [&](const Tensor& probe) {
      Tensor y = act_forward(params, probe);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += up[i] * y[i];
      return s;
    };
    FiniteDiffResult fd = finite_diff_grad(f, x, opt.h_scale);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ch = (i / inner) % c;
      const double h = opt.h_scale * std::max(1.0, std::fabs(x[i]));
      const double radius = std::max(opt.kink_delta, 2.0 * h);
      if (detail::near_any(x[i], activation_kinks(params, ch), radius)) continue;
      const double err = detail::rel_err(analytic[i], fd.grad[i], opt.abs_floor);
      rep.worst_input_err = std::max(rep.worst_input_err, err);
      if (!grad_close(analytic[i], fd.grad[i], opt.tol, opt.abs_floor)) rep.pass = false;
      ++rep.input_points;
    }
  }

  // --- parameter gradients ---
  const bool thresholded =
      kind == ActivationKind::kSReLU || kind == ActivationKind::kAPLU;
  for (int cfg = 0; cfg < opt.param_configs; ++cfg) {
    ActivationParams params = act_init(kind, max_input, opt.channels, rng);
    detail::randomize_params(params, rng);
    if (params.learnable.empty()) break;  // nothing to check for this kind
    Tensor x(shape), up(shape);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-3.0 * m, 3.0 * m);
      up[i] = rng.uniform(0.5, 1.5);
    }
    auto analytic = act_backward_params(params, x, up);
    for (auto& [name, tensor] : params.learnable) {
      const Tensor& ag = analytic.at(name);
      auto f = [&](const Tensor& theta) {
        ActivationParams probe = params;
        probe.learnable[name] = theta;
        Tensor y = act_forward(probe, x);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += up[i] * y[i];
        return s;
      };
      FiniteDiffResult fd = finite_diff_grad(f, tensor, opt.h_scale);
      for (std::size_t j = 0; j < tensor.size(); ++j) {
        if (thresholded && (name == "tl" || name == "tr" || name == "b")) {
          // stepping a threshold past a sample point makes the quotient
          // invalid; skip configurations where a sample sits that close
          const double h = opt.h_scale * std::max(1.0, std::fabs(tensor[j]));
          const double radius = std::max(opt.kink_delta, 2.0 * h);
          const std::size_t ch = tensor.rank() == 2 ? j / tensor.dim(1) : j;
          bool blocked = false;
          for (std::size_t i = 0; i < n && !blocked; ++i) {
            if ((i / inner) % c == ch && std::fabs(x[i] - tensor[j]) <= radius)
              blocked = true;
          }
          if (blocked) continue;
        }
        const double err = detail::rel_err(ag[j], fd.grad[j], opt.abs_floor);
        rep.worst_param_err = std::max(rep.worst_param_err, err);
        if (!grad_close(ag[j], fd.grad[j], opt.tol, opt.abs_floor)) rep.pass = false;
        ++rep.param_points;
      }
    }
  }
  return rep;
}

// All activation kinds, each at maxInput 1 plus 255 where the kind uses it.
inline std::vector<FidelityReport> run_gradient_fidelity(
    const FidelityOptions& opt = {}) {
  std::vector<FidelityReport> reports;
  for (ActivationKind kind : kAllActivationKinds) {
    reports.push_back(check_activation_gradients(kind, 1.0, opt));
    if (kind_uses_max_input(kind)) {
      reports.push_back(check_activation_gradients(kind, 255.0, opt));
    }
  }
  return reports;
}

// Exact pointwise comparison against ReLU at freshly initialized
// parameters over a uniform grid on [-3M, 3M].
inline bool relu_equivalent_at_init(ActivationKind kind, double max_input,
                                    int channels, std::uint64_t seed,
                                    int grid_points = 10000,
                                    double* max_abs_diff = nullptr) {
  Rng rng(seed);
  ActivationParams params = act_init(kind, max_input, channels, rng);
  const double lo = -3.0 * max_input, hi = 3.0 * max_input;
  const std::size_t c = static_cast<std::size_t>(channels);
  Tensor x({c, static_cast<std::size_t>(grid_points)});
  for (int g = 0; g < grid_points; ++g) {
    const double v = lo + (hi - lo) * g / (grid_points - 1);
    for (std::size_t ch = 0; ch < c; ++ch)
      x[ch * static_cast<std::size_t>(grid_points) + g] = v;
  }
  Tensor y = act_forward(params, x);
  double worst = 0.0;
  bool equal = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double relu = x[i] >= 0.0 ? x[i] : 0.0;
    if (y[i] != relu) equal = false;
    worst = std::max(worst, std::fabs(y[i] - relu));
  }
  if (max_abs_diff) *max_abs_diff = worst;
  return equal;
}

}  // namespace sact

#endif  // SACT_FIDELITY_HPP
