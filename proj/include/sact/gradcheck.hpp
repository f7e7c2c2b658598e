#ifndef SACT_GRADCHECK_HPP
#define SACT_GRADCHECK_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "sact/tensor.hpp"

namespace sact {

struct FiniteDiffResult {
  Tensor grad;             // central difference per coordinate
  std::vector<bool> kink;  // forward/backward quotients disagree at this coordinate
};

// Central-difference gradient oracle with a per-coordinate relative step
// h_i = h_scale * max(1, |x_i|). Coordinates where the one-sided quotients
// disagree are flagged as kinks; callers exclude those from comparisons.
inline FiniteDiffResult finite_diff_grad(
    const std::function<double(const Tensor&)>& f, const Tensor& x,
    double h_scale = 1e-4) {
  FiniteDiffResult result;
  result.grad = Tensor(x.shape());
  result.kink.assign(x.size(), false);
  Tensor probe = x;
  const double f0 = f(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double h = h_scale * std::max(1.0, std::fabs(xi));
    probe[i] = xi + h;
    const double fp = f(probe);
    probe[i] = xi - h;
    const double fm = f(probe);
    probe[i] = xi;
    result.grad[i] = (fp - fm) / (2.0 * h);
    const double fwd = (fp - f0) / h;
    const double bwd = (f0 - fm) / h;
    const double scale = 1.0 + std::max(std::fabs(fwd), std::fabs(bwd));
    if (std::fabs(fwd - bwd) > 1e-2 * scale) result.kink[i] = true;
  }
  return result;
}

// Relative agreement used by every gradient check in the project:
// |a - b| <= tol * max(|a|, |b|) with a small absolute floor for
// gradients that are legitimately zero.
inline bool grad_close(double analytic, double numeric, double tol,
                       double abs_floor = 1e-9) {
  const double diff = std::fabs(analytic - numeric);
  const double scale = std::max(std::fabs(analytic), std::fabs(numeric));
  return diff <= tol * scale + abs_floor;
}

}  // namespace sact

#endif  // SACT_GRADCHECK_HPP
