#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pmhd {

/// AR kind holds the inversion weights of (1-B)^d, MA kind the generation
/// weights of (1-B)^{-d}.
enum class FilterKind
{
  ar,
  ma
};

/// Truncated fractional-filter coefficients c_0..c_M, c_0 = 1.
struct FracCoeffs
{
  double d = 0.0;
  FilterKind kind = FilterKind::ar;
  std::vector<double> values;

  std::size_t order() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// Resource guard on the truncation order.
inline constexpr std::size_t kMaxTruncation = std::size_t{1} << 24;

/// pi_0 = 1, pi_j = pi_{j-1} (j-1-d) / j. Requires 0 < d < 1/2.
FracCoeffs pi_coeffs(double d, std::size_t order);

/// psi_0 = 1, psi_j = psi_{j-1} (j-1+d) / j. Requires 0 < d < 1/2.
FracCoeffs psi_coeffs(double d, std::size_t order);

/// Direct log-gamma evaluation of the j-th coefficient with explicit sign
/// tracking. Independent of the recurrence; meant for cross-checking it.
/// Throws std::domain_error when a gamma argument hits a pole.
double gamma_ratio_oracle(std::size_t j, double d, FilterKind kind);

/// One-sided filter output sum_{j=0}^{min(M,t)} c_j x[t-j] at zero-based
/// index t. Values before x[0] are taken as zero.
double apply_filter(const FracCoeffs& coeffs, std::span<const double> x, std::size_t t);

} // namespace pmhd
