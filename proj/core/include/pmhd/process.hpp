#pragma once

#include "pmhd/family.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pmhd {

/// Innovation law. Gaussian scales are per-season standard deviations,
/// Cauchy scales are per-season gamma parameters (location 0). A single
/// scale is broadcast to every season.
struct NoiseSpec
{
  Family family = Family::gaussian;
  std::vector<double> scales{1.0};

  static NoiseSpec gaussian(double sigma = 1.0) { return {Family::gaussian, {sigma}}; }
  static NoiseSpec cauchy(double gamma = 1.0) { return {Family::cauchy, {gamma}}; }

  double scale_for(std::size_t season) const
  {
    return scales.size() == 1 ? scales.front() : scales.at(season);
  }
};

inline constexpr std::size_t kDefaultGenerationTruncation = 5000;

/// How a realization is built from the innovations.
///
/// `ar_recursion` solves sum_{j=0}^{M} pi_j(d_{season(t)}) X_{t-j} = eps_t
/// forward in time, so inverting at the true d returns the innovations.
/// `ma_truncated` sums psi_j(d_{season(t)}) eps_{t-j}; the two coincide only
/// when every season shares the same d.
enum class Generator
{
  ar_recursion,
  ma_truncated
};

std::string_view to_string(Generator generator);
Generator parse_generator(std::string_view name);

/// Periodic purely fractional process: season i of cycle m is
/// (1-B)^{d_i} X_{i+pm} = eps_{i+pm}, with n = p * n'.
struct ProcessSpec
{
  std::size_t period = 1;
  std::vector<double> d;
  NoiseSpec noise;
  std::size_t n = 0;
  std::size_t truncation = kDefaultGenerationTruncation;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
  Generator generator = Generator::ar_recursion;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// One realization X_1..X_n. `spec` is empty for externally ingested data.
struct Series
{
  std::size_t period = 1;
  std::vector<double> values;
  std::optional<ProcessSpec> spec;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t cycles() const noexcept { return period == 0 ? 0 : values.size() / period; }
};

/// Innovations are drawn over an index range extended M + burn_in steps
/// (rounded up to whole cycles) before the first observation. The AR
/// recursion starts from zero on that extended range; the MA sum reads the
/// innovation history directly. Bit-for-bit deterministic in (spec, seed).
Series simulate(const ProcessSpec& spec);

/// i.i.d. draws of length `count`. Element k uses the scale of season
/// k mod (number of scales), so per-season scaling lines up when the draw
/// starts on season 0.
std::vector<double> draw_noise(const NoiseSpec& noise, std::size_t count, std::uint64_t seed);

} // namespace pmhd
