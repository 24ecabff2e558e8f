#include "pmhd/hellinger.hpp"
#include "pmhd/kde.hpp"
#include "pmhd/process.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace pmhd;

namespace {

constexpr double kPi = std::numbers::pi;

BlockMatrix normal_samples(std::size_t count, std::size_t dim, std::uint64_t seed)
{
  return block(draw_noise(NoiseSpec::gaussian(), count * dim, seed), dim);
}

// Midpoint rule for a 1-D integrand over R via u = tan(theta), which handles Cauchy tails.
template <class F>
double integrate_real_line(F f, std::size_t nodes = 200000)
{
  const double step = kPi / static_cast<double>(nodes);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double theta = -kPi / 2 + (static_cast<double>(i) + 0.5) * step;
    const double c = std::cos(theta);
    acc += f(std::tan(theta)) / (c * c);
  }
  return acc * step;
}

} // namespace

TEST(Bandwidth, Examples)
{
  EXPECT_NEAR(bandwidth(100, BandwidthRule::for_dimension(2)), 0.464158883361278, 1e-12);
  EXPECT_NEAR(bandwidth(1000, BandwidthRule::for_dimension(1)), std::pow(1000.0, -0.2), 1e-15);
  EXPECT_DOUBLE_EQ(bandwidth(1, {-0.5, 2.0}), 2.0);
  EXPECT_NEAR(bandwidth(100, {-0.5, 2.0}), 0.2, 1e-15);
  EXPECT_THROW(bandwidth(100, {0.0, 1.0}), ConfigError);
  EXPECT_THROW(bandwidth(100, {-1.0, 1.0}), ConfigError);
  EXPECT_THROW(bandwidth(100, {-0.2, 0.0}), ConfigError);
  EXPECT_THROW(bandwidth(0, BandwidthRule::for_dimension(1)), ConfigError);
}

TEST(Kernel, UnivariateIntegratesToOne)
{
  for (Family f : {Family::gaussian, Family::cauchy}) {
    const KernelSpec k{f, 1};
    EXPECT_NEAR(integrate_real_line([&](double u) { return k.univariate(u); }), 1.0, 1e-8) << to_string(f);
  }
}

TEST(Kernel, L2NormMatchesQuadrature)
{
  for (Family f : {Family::gaussian, Family::cauchy}) {
    const KernelSpec k1{f, 1};
    const double one = integrate_real_line([&](double u) { return k1.univariate(u) * k1.univariate(u); });
    for (std::size_t dim = 1; dim <= 3; ++dim)
      EXPECT_NEAR(kernel_l2_norm({f, dim}), std::pow(one, static_cast<double>(dim)), 1e-10) << to_string(f);
  }
  EXPECT_NEAR(kernel_l2_norm({Family::gaussian, 1}), 1.0 / (2.0 * std::sqrt(kPi)), 1e-15);
  EXPECT_NEAR(kernel_l2_norm({Family::cauchy, 1}), 1.0 / (2.0 * kPi), 1e-15);
}

TEST(Kernel, ProductAndDimensionCheck)
{
  const KernelSpec k{Family::cauchy, 2};
  const std::vector<double> u{0.5, -1.0};
  EXPECT_DOUBLE_EQ(k(u), k.univariate(0.5) * k.univariate(-1.0));
  EXPECT_THROW(k(std::vector<double>{1.0}), ConfigError);
}

TEST(Kde, SinglePointPeak)
{
  const KdeModel f(block(std::vector<double>{0.0}, 1), {Family::gaussian, 1}, 1.0);
  EXPECT_NEAR(f(std::vector<double>{0.0}), 0.398942280401433, 1e-12);
  const KdeModel g(block(std::vector<double>{0.0, 0.0}, 2), {Family::gaussian, 2}, 0.5);
  EXPECT_NEAR(g(std::vector<double>{0.0, 0.0}), 0.398942280401433 * 0.398942280401433 / 0.25, 1e-12);
}

TEST(Kde, IntegratesToOne)
{
  for (Family fam : {Family::gaussian}) {
    const KdeModel f(normal_samples(200, 2, 3), {fam, 2}, 0.4);
    const QuadGrid grid({{-12, 12, 601}, {-12, 12, 601}}, QuadRule::simpson);
    const auto v = f.evaluate_tensor(grid.all_nodes());
    const auto w = grid.tensor_weights();
    double mass = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      mass += w[i] * v[i];
    EXPECT_NEAR(mass, 1.0, 1e-6);
  }
  // Cauchy tails need the substitution; one dimension suffices.
  const KdeModel c(normal_samples(50, 1, 4), {Family::cauchy, 1}, 0.3);
  EXPECT_NEAR(integrate_real_line([&](double x) { return c(std::vector<double>{x}); }), 1.0, 1e-6);
}

TEST(Kde, ExplicitNormalizerScales)
{
  const auto s = normal_samples(40, 1, 5);
  const KdeModel a(s, {Family::gaussian, 1}, 0.3);
  const KdeModel b(s, {Family::gaussian, 1}, 0.3, 80.0);
  const std::vector<double> x{0.2};
  EXPECT_NEAR(b(x), a(x) / 2.0, 1e-15);
  EXPECT_THROW(KdeModel(s, {Family::gaussian, 1}, 0.3, 0.0), ConfigError);
}

TEST(Kde, FirstMomentEqualsSampleMean)
{
  const auto s = normal_samples(300, 1, 6);
  double mean = 0.0;
  for (std::size_t m = 0; m < s.rows(); ++m)
    mean += s(m, 0);
  mean /= static_cast<double>(s.rows());
  const KdeModel f(s, {Family::gaussian, 1}, 0.35);
  const QuadGrid grid({{-15, 15, 20001}}, QuadRule::simpson);
  const auto x = grid.nodes(0);
  const auto w = grid.weights(0);
  const auto v = f.evaluate_tensor(grid.all_nodes());
  double m1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m1 += w[i] * x[i] * v[i];
  EXPECT_LT(std::abs(m1 - mean), 1e-6);
}

TEST(Kde, ShiftEquivariance)
{
  const auto s = normal_samples(60, 2, 7);
  BlockMatrix shifted = s;
  const std::vector<double> c{1.5, -0.75};
  for (std::size_t m = 0; m < s.rows(); ++m)
    for (std::size_t k = 0; k < 2; ++k)
      shifted(m, k) += c[k];
  for (Family fam : {Family::gaussian, Family::cauchy}) {
    const KdeModel f(s, {fam, 2}, 0.5);
    const KdeModel g(shifted, {fam, 2}, 0.5);
    for (double x0 : {-1.0, 0.0, 0.7})
      for (double x1 : {-0.3, 2.0}) {
        const std::vector<double> x{x0, x1};
        const std::vector<double> xs{x0 + c[0], x1 + c[1]};
        EXPECT_NEAR(f(x), g(xs), 1e-13);
      }
  }
}

TEST(Kde, SymmetricSamplesGiveSymmetricDensity)
{
  BlockMatrix s(4, 1);
  s(0, 0) = -1.0;
  s(1, 0) = 1.0;
  s(2, 0) = -0.2;
  s(3, 0) = 0.2;
  for (Family fam : {Family::gaussian, Family::cauchy}) {
    const KdeModel f(s, {fam, 1}, 0.4);
    for (double x : {0.1, 0.5, 3.0})
      EXPECT_NEAR(f(std::vector<double>{x}), f(std::vector<double>{-x}), 1e-15);
  }
}

TEST(Kde, TensorMatchesPointwise)
{
  for (Family fam : {Family::gaussian, Family::cauchy}) {
    for (std::size_t p = 1; p <= 3; ++p) {
      const KdeModel f(normal_samples(37, p, 10 + p), {fam, p}, 0.45);
      std::vector<std::vector<double>> axes;
      for (std::size_t k = 0; k < p; ++k) {
        std::vector<double> a;
        for (std::size_t i = 0; i < 5 + k; ++i)
          a.push_back(-2.0 + 0.9 * static_cast<double>(i) + 0.1 * static_cast<double>(k));
        axes.push_back(a);
      }
      const auto v = f.evaluate_tensor(axes);
      std::size_t idx = 0;
      std::vector<std::size_t> pos(p, 0);
      std::vector<double> x(p);
      while (true) {
        for (std::size_t k = 0; k < p; ++k)
          x[k] = axes[k][pos[k]];
        ASSERT_NEAR(v[idx], f(x), 1e-13 * (1.0 + f(x))) << "p=" << p << " idx=" << idx;
        ++idx;
        std::size_t k = p;
        while (k > 0 && ++pos[k - 1] == axes[k - 1].size())
          pos[--k] = 0;
        if (k == 0)
          break;
      }
      EXPECT_EQ(idx, v.size());
    }
  }
}

TEST(Kde, SupErrorShrinksWithSampleSize)
{
  auto sup_error = [](std::size_t n, std::uint64_t seed) {
    const KdeModel f(normal_samples(n, 1, seed), {Family::gaussian, 1}, bandwidth(n, BandwidthRule::for_dimension(1)));
    double worst = 0.0;
    for (double x = -4.0; x <= 4.0; x += 0.05) {
      const double truth = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
      worst = std::max(worst, std::abs(f(std::vector<double>{x}) - truth));
    }
    return worst;
  };
  double small = 0.0, large = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    small += sup_error(100, seed);
    large += sup_error(10000, seed + 100);
  }
  EXPECT_LT(large, small / 2.0);
}

TEST(Kde, RejectsBadInput)
{
  const auto s = normal_samples(10, 2, 1);
  EXPECT_THROW(KdeModel(s, {Family::gaussian, 3}, 0.5), ConfigError);
  EXPECT_THROW(KdeModel(s, {Family::gaussian, 2}, 0.0), ConfigError);
  EXPECT_THROW(KdeModel(BlockMatrix(0, 2), {Family::gaussian, 2}, 0.5), ConfigError);
  const KdeModel f(s, {Family::gaussian, 2}, 0.5);
  EXPECT_THROW(f(std::vector<double>{1.0}), ConfigError);
  const std::vector<std::vector<double>> one_axis{{0.0}};
  EXPECT_THROW(f.evaluate_tensor(one_axis), ConfigError);
}

TEST(Kde, GridCsv)
{
  const std::vector<std::vector<double>> axes{{0.0, 1.0}, {2.0}};
  const std::vector<double> v{0.25, 0.5};
  std::stringstream out;
  write_grid_csv(axes, v, out);
  EXPECT_EQ(out.str(), "x_1,x_2,density\n0,2,0.25\n1,2,0.5\n");
}
