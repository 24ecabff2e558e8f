#pragma once

#include "pmhd/family.hpp"
#include "pmhd/residuals.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace pmhd {

/// Product kernel on R^dim built from a standard univariate density.
struct KernelSpec
{
  Family family = Family::gaussian;
  std::size_t dim = 1;

  double univariate(double u) const;
  double operator()(std::span<const double> u) const;
};

/// h_n = ell * n^alpha with -1 < alpha < 0 and ell > 0.
struct BandwidthRule
{
  double alpha = -1.0 / 5.0;
  double ell = 1.0;

  /// alpha = -1/(p+4), ell = 1.
  static BandwidthRule for_dimension(std::size_t p);
  void validate() const;
};

double bandwidth(std::size_t n, const BandwidthRule& rule);

/// Integral of K^2 over R^dim: (2 sqrt(pi))^-dim for Gaussian,
/// (2 pi)^-dim for Cauchy.
double kernel_l2_norm(const KernelSpec& kernel);

/// f(x) = 1/(N h^p) sum_m K((x - s_m)/h). N defaults to the sample count so
/// that f integrates to one.
class KdeModel
{
public:
  KdeModel(BlockMatrix samples, KernelSpec kernel, double h);
  KdeModel(BlockMatrix samples, KernelSpec kernel, double h, double normalizer);

  double operator()(std::span<const double> x) const;

  /// Values on the tensor grid axes[0] x ... x axes[p-1], last axis fastest.
  /// Uses the product structure of the kernel, so cost is
  /// O(N * sum |axis|) kernel evaluations plus one contraction.
  std::vector<double> evaluate_tensor(std::span<const std::vector<double>> axes) const;

  const BlockMatrix& samples() const noexcept { return samples_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  double bandwidth() const noexcept { return h_; }
  double normalizer() const noexcept { return normalizer_; }
  std::size_t dim() const noexcept { return kernel_.dim; }

private:
  BlockMatrix samples_;
  KernelSpec kernel_;
  double h_;
  double normalizer_;
};

/// Columns x_1..x_p,density in tensor order.
void write_grid_csv(std::span<const std::vector<double>> axes, std::span<const double> values, std::ostream& out);

} // namespace pmhd
