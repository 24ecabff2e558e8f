#include "pmhd/fracdiff.hpp"

#include "pmhd/family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pmhd {

namespace {

void check_args(double d, std::size_t order)
{
  if (!(d > 0.0 && d < 0.5))
    throw ConfigError("d", "memory parameter must lie in (0, 1/2), got " + std::to_string(d));
  if (order > kMaxTruncation)
    throw ConfigError("truncation", "order " + std::to_string(order) + " exceeds cap " +
                                        std::to_string(kMaxTruncation));
}

FracCoeffs recurrence(double d, std::size_t order, FilterKind kind)
{
  check_args(d, order);
  const double shift = kind == FilterKind::ar ? -d : d;
  FracCoeffs out{d, kind, std::vector<double>(order + 1)};
  out.values[0] = 1.0;
  for (std::size_t j = 1; j <= order; ++j) {
    const auto jd = static_cast<double>(j);
    out.values[j] = out.values[j - 1] * (jd - 1.0 + shift) / jd;
  }
  return out;
}

// log|Gamma(x)| and sign(Gamma(x)); x must not be a non-positive integer.
std::pair<double, double> signed_lgamma(double x)
{
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("gamma pole at " + std::to_string(x));
  double sign = 1.0;
  if (x < 0.0) {
    const auto fl = static_cast<long long>(std::floor(x));
    sign = (fl % 2 == 0) ? 1.0 : -1.0;
  }
  return {std::lgamma(x), sign};
}

} // namespace

FracCoeffs pi_coeffs(double d, std::size_t order)
{
  return recurrence(d, order, FilterKind::ar);
}

FracCoeffs psi_coeffs(double d, std::size_t order)
{
  return recurrence(d, order, FilterKind::ma);
}

double gamma_ratio_oracle(std::size_t j, double d, FilterKind kind)
{
  if (!(std::abs(d) < 0.5))
    throw std::domain_error("|d| must be below 1/2");
  // Gamma(j + s) / (Gamma(j + 1) Gamma(s)), s = -d (AR) or +d (MA).
  const double s = kind == FilterKind::ar ? -d : d;
  const auto jd = static_cast<double>(j);
  const auto [num, num_sign] = signed_lgamma(jd + s);
  const auto [den, den_sign] = signed_lgamma(s);
  const double log_fact = std::lgamma(jd + 1.0);
  return num_sign * den_sign * std::exp(num - log_fact - den);
}

double apply_filter(const FracCoeffs& coeffs, std::span<const double> x, std::size_t t)
{
  if (t >= x.size())
    throw std::out_of_range("apply_filter: index " + std::to_string(t) + " outside series of length " +
                            std::to_string(x.size()));
  const std::size_t last = std::min(coeffs.order(), t);
  double acc = 0.0;
  for (std::size_t j = 0; j <= last; ++j)
    acc += coeffs.values[j] * x[t - j];
  return acc;
}

} // namespace pmhd
