#include "krm/bounds.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "krm/errors.hpp"

namespace krm {

namespace {

constexpr double kLogZero = std::numeric_limits<double>::lowest();

// log(1 + e^z) without overflow.
double log1p_exp(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Probability 1 - e^{y} floored at 0, with its logarithm.
void set_complement_probability(BoundReport& r, double y) {
  if (y >= 0.0) {
    r.value = 0.0;
    r.log_value = kLogZero;
    return;
  }
  r.value = -std::expm1(y);
  r.log_value = y < -std::numbers::ln2 ? std::log1p(-std::exp(y)) : std::log(r.value);
}

BoundReport invalid(std::string name, NamedValues inputs) {
  BoundReport r;
  r.name = std::move(name);
  r.inputs = std::move(inputs);
  r.valid = false;
  r.value = 0.0;
  r.log_value = kLogZero;
  return r;
}

double log_factorial_of(int l_minus_one) { return boost::math::lgamma(static_cast<double>(l_minus_one) + 1.0); }

}  // namespace

double BoundReport::extra(const std::string& key) const {
  for (const auto& [k, v] : extras) {
    if (k == key) return v;
  }
  throw std::out_of_range("bound report " + name + " has no extra '" + key + "'");
}

double truncation_constant_b() { return 2.0 * std::sqrt(std::numbers::pi) * std::exp(-1.5) / std::sqrt(3.0); }

BoundReport bound_rM(double c, int M, double norm_f) {
  NamedValues inputs{{"c", c}, {"M", static_cast<double>(M)}, {"normF", norm_f}};
  if (!(c > 0.0) || !(norm_f >= 0.0) || M < 1 || !(M > std::numbers::e * c / 2.0)) {
    return invalid("bound_rM", std::move(inputs));
  }
  const double r = std::numbers::e * c / (2.0 * M);
  BoundReport rep;
  rep.name = "bound_rM";
  rep.inputs = std::move(inputs);
  rep.valid = true;
  if (norm_f == 0.0) {
    rep.value = 0.0;
    rep.log_value = kLogZero;
    return rep;
  }
  rep.log_value = std::log(truncation_constant_b()) - std::log(c) + (M + 1.5) * std::log(r) -
                  0.5 * std::log1p(-r * r) + std::log(norm_f);
  rep.value = std::exp(rep.log_value);
  rep.extras = {{"ratio", r}};
  return rep;
}

BoundReport bound_expected_R(int N, int M, double c, double norm_f) {
  BoundReport base = bound_rM(c, M, norm_f);
  NamedValues inputs{{"N", static_cast<double>(N)}, {"M", static_cast<double>(M)}, {"c", c}, {"normF", norm_f}};
  if (!base.valid || N < 1) return invalid("bound_expected_R", std::move(inputs));
  const double factor = static_cast<double>(N) * (M + 1.0);
  BoundReport rep;
  rep.name = "bound_expected_R";
  rep.inputs = std::move(inputs);
  rep.valid = true;
  rep.value = factor * base.value;
  rep.log_value = base.value > 0.0 ? std::log(factor) + base.log_value : kLogZero;
  rep.extras = {{"bound_rM", base.value}};
  return rep;
}

BoundReport mcdiarmid_probability(double eps, double c, int M, int N, double B) {
  NamedValues inputs{{"eps", eps}, {"c", c}, {"M", static_cast<double>(M)}, {"N", static_cast<double>(N)}, {"B", B}};
  if (!(eps > 0.0) || !(c > 0.0) || !(B > 0.0) || N < 1 || M < 1 || !(M > std::numbers::e * c / 2.0)) {
    return invalid("mcdiarmid_probability", std::move(inputs));
  }
  const double r = std::numbers::e * c / (2.0 * M);
  const double log_d = std::log(64.0 * std::numbers::pi) + 2.0 * std::log(B) - std::log(3.0) - 3.0 -
                       2.0 * std::log(c) + (2.0 * M + 3.0) * std::log(r) +
                       2.0 * (std::log(M + 1.0) + std::log(2.0 * N - 1.0) - std::log1p(-r));
  // 1 - 2 exp(-2 eps^2 / D)
  const double exponent = std::exp(std::numbers::ln2 + 2.0 * std::log(eps) - log_d);
  BoundReport rep;
  rep.name = "mcdiarmid_probability";
  rep.inputs = std::move(inputs);
  rep.valid = true;
  set_complement_probability(rep, std::numbers::ln2 - exponent);
  rep.extras = {{"D", std::exp(log_d)}, {"log_D", log_d}};
  return rep;
}

double log_hermite_tail(int l, double c) {
  if (!(c > 0.0) || l < 0) throw DomainError("log_hermite_tail needs l >= 0 and c > 0");
  if (l == 0) return kLogZero;
  return (l - 1.0) * std::log(2.0 * c) - 0.5 * std::log(std::numbers::pi * c) - log_factorial_of(l - 1) - c;
}

BoundReport hermite_tail_R(int l, double c) {
  NamedValues inputs{{"l", static_cast<double>(l)}, {"c", c}};
  if (l < 1 || !(c > 0.0)) return invalid("hermite_tail_R", std::move(inputs));
  BoundReport rep;
  rep.name = "hermite_tail_R";
  rep.inputs = std::move(inputs);
  rep.valid = true;
  rep.log_value = log_hermite_tail(l, c);
  rep.value = std::exp(rep.log_value);
  return rep;
}

BoundReport hermite_L2_err(double c, int n, double norm_f) {
  NamedValues inputs{{"c", c}, {"n", static_cast<double>(n)}, {"normF", norm_f}};
  if (!(c > 0.0) || n < 0 || !(norm_f >= 0.0)) return invalid("hermite_L2_err", std::move(inputs));
  BoundReport rep;
  rep.name = "hermite_L2_err";
  rep.inputs = std::move(inputs);
  rep.valid = true;
  if (norm_f == 0.0) {
    rep.value = 0.0;
    rep.log_value = kLogZero;
    return rep;
  }
  rep.log_value = std::log(34.0) + 1.5 * std::log(c) - 0.5 * std::log(2.0 * n + 1.0) + std::log(norm_f);
  rep.value = std::exp(rep.log_value);
  return rep;
}

ChernoffReport chernoff_bounds(double c, int M, double delta) {
  NamedValues inputs{{"c", c}, {"M", static_cast<double>(M)}, {"delta", delta}};
  if (!(c > 0.0) || M < 1 || !(delta > 0.0 && delta <= 1.0)) {
    return {invalid("chernoff_min", inputs), invalid("chernoff_max", inputs)};
  }
  const double log_m = std::log(static_cast<double>(M));
  const double log_quarter = 0.25 * std::log(c * std::numbers::pi);
  const double log_l = log_m + log_quarter - 0.5 * c;

  auto side = [&](std::string name, int tail_index, double threshold_factor, double denominator) {
    const double log_r = log_hermite_tail(tail_index, c);
    // log(1 + M R)
    const double log_one_plus = log_r == kLogZero ? 0.0 : log1p_exp(log_m + log_r);
    BoundReport rep;
    rep.name = std::move(name);
    rep.inputs = inputs;
    rep.valid = true;
    const double log_exponent = 2.0 * std::log(delta) + log_one_plus + 0.5 * c - std::log(denominator) - log_quarter;
    set_complement_probability(rep, log_m - std::exp(log_exponent));
    const double log_threshold =
        threshold_factor > 0.0 ? std::log(threshold_factor) + log_m + log_one_plus : kLogZero;
    rep.extras = {{"threshold", threshold_factor > 0.0 ? std::exp(log_threshold) : 0.0},
                  {"log_threshold", log_threshold},
                  {"R", log_r == kLogZero ? 0.0 : std::exp(log_r)},
                  {"tail_index", static_cast<double>(tail_index)},
                  {"L", std::exp(log_l)}};
    return rep;
  };

  ChernoffReport out;
  out.min = side("chernoff_min", M - 1, 1.0 - delta, 2.0);
  out.max = side("chernoff_max", 0, 1.0 + delta, 3.0);
  return out;
}

int landau_widom_M(double c, double alpha) {
  if (!(c > 0.0) || !(alpha >= 0.0)) throw DomainError("landau_widom_M needs c > 0 and alpha >= 0");
  const double raw = 2.0 * c / std::numbers::pi + alpha * std::log(std::max(c, 1.0 + 1e-9));
  return std::max(4, static_cast<int>(std::ceil(raw)));
}

}  // namespace krm
