#pragma once

#include <functional>
#include <memory>
#include <string>

namespace krm {

// sin(c u) / (c u), with the Taylor polynomial 1 - (cu)^2/6 + (cu)^4/120 for |cu| < 1e-4.
double sinc_eval(double c, double u);

// || sinc(c (x - y)) ||_{L^2([-1,1]^2)}, via the one-dimensional reduction
// 2 * int_0^2 (2 - u) sinc^2(c u) du evaluated by Gauss-Legendre quadrature.
double sinc_l2_norm(double c);

enum class KernelKind { Sinc, Custom };

// Symmetric kernel f(x, y) on [-1, 1]^2 together with its sup bound B and L^2 norm.
class KernelSpec {
 public:
  using Function = std::function<double(double, double)>;

  static KernelSpec sinc(double c);
  // f must be symmetric; sup_bound and l2_norm are the caller's values and must be positive.
  static KernelSpec custom(Function f, double sup_bound, double l2_norm, std::string name = "custom");

  double operator()(double x, double y) const {
    return kind_ == KernelKind::Sinc ? sinc_eval(c_, x - y) : (*fn_)(x, y);
  }

  KernelKind kind() const { return kind_; }
  bool is_sinc() const { return kind_ == KernelKind::Sinc; }
  double bandwidth() const { return c_; }  // 0 for custom kernels
  double sup_bound() const { return sup_bound_; }
  double l2_norm() const { return l2_norm_; }
  const std::string& name() const { return name_; }

 private:
  KernelSpec() = default;

  KernelKind kind_ = KernelKind::Sinc;
  double c_ = 0.0;
  double sup_bound_ = 1.0;
  double l2_norm_ = 0.0;
  std::string name_;
  std::shared_ptr<const Function> fn_;
};

}  // namespace krm
