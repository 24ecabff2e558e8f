#include "pmhd/process.hpp"

#include "pmhd/fracdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace pmhd {

void ProcessSpec::validate() const
{
  if (period == 0)
    throw ConfigError("p", "period must be at least 1");
  if (d.size() != period)
    throw ConfigError("d", "expected " + std::to_string(period) + " memory parameters, got " +
                               std::to_string(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0 && d[i] < 0.5))
      throw ConfigError("d", "d[" + std::to_string(i) + "] = " + std::to_string(d[i]) +
                                 " outside (0, 1/2)");
  }
  if (noise.scales.size() != 1 && noise.scales.size() != period)
    throw ConfigError("noise", "need 1 or p scales, got " + std::to_string(noise.scales.size()));
  for (double s : noise.scales) {
    if (!(s > 0.0) || !std::isfinite(s))
      throw ConfigError("noise", "scales must be positive and finite");
  }
  if (n == 0 || n % period != 0)
    throw ConfigError("n", "sample size " + std::to_string(n) + " must be a positive multiple of p = " +
                               std::to_string(period));
  if (truncation > kMaxTruncation)
    throw ConfigError("truncation", "exceeds cap " + std::to_string(kMaxTruncation));
}

std::vector<double> draw_noise(const NoiseSpec& noise, std::size_t count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  const std::size_t seasons = noise.scales.size();
  switch (noise.family) {
    case Family::gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t k = 0; k < count; ++k)
        out[k] = noise.scales[k % seasons] * normal(rng);
      break;
    }
    case Family::cauchy: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (std::size_t k = 0; k < count; ++k)
        out[k] = noise.scales[k % seasons] * std::tan(std::numbers::pi * (unif(rng) - 0.5));
      break;
    }
  }
  return out;
}

std::string_view to_string(Generator generator)
{
  return generator == Generator::ar_recursion ? "ar" : "ma";
}

Generator parse_generator(std::string_view name)
{
  if (name == "ar")
    return Generator::ar_recursion;
  if (name == "ma")
    return Generator::ma_truncated;
  throw ConfigError("generator", "expected 'ar' or 'ma', got '" + std::string(name) + "'");
}

namespace {

void generate_ma(const ProcessSpec& spec, std::span<const double> eps, std::size_t history, std::size_t burn,
                 std::span<double> out)
{
  const std::size_t p = spec.period;
  const std::size_t M = spec.truncation;
  std::vector<FracCoeffs> psi;
  psi.reserve(p);
  for (double di : spec.d)
    psi.push_back(psi_coeffs(di, M));

  for (std::size_t t = 0; t < burn + out.size(); ++t) {
    const std::vector<double>& w = psi[t % p].values;
    const double* e = eps.data() + history + t;
    double acc = 0.0;
    for (std::size_t j = 0; j <= M; ++j)
      acc += w[j] * e[-static_cast<std::ptrdiff_t>(j)];
    if (t >= burn)
      out[t - burn] = acc;
  }
}

void generate_ar(const ProcessSpec& spec, std::span<const double> eps, std::span<double> out)
{
  const std::size_t p = spec.period;
  const std::size_t M = spec.truncation;
  std::vector<FracCoeffs> pi;
  pi.reserve(p);
  for (double di : spec.d)
    pi.push_back(pi_coeffs(di, M));

  // Index 0 of `eps` is season 0; x holds the whole extended path.
  std::vector<double> x(eps.size());
  for (std::size_t t = 0; t < eps.size(); ++t) {
    const std::vector<double>& w = pi[t % p].values;
    const std::size_t last = std::min(M, t);
    double acc = eps[t];
    for (std::size_t j = 1; j <= last; ++j)
      acc -= w[j] * x[t - j];
    x[t] = acc;
  }
  std::copy(x.end() - static_cast<std::ptrdiff_t>(out.size()), x.end(), out.begin());
}

} // namespace

Series simulate(const ProcessSpec& spec)
{
  spec.validate();
  const std::size_t p = spec.period;
  const std::size_t M = spec.truncation;

  // Round the discarded prefix up to whole cycles so season labels stay aligned.
  const std::size_t burn = (spec.burn_in + p - 1) / p * p;
  const std::size_t history = (M + p - 1) / p * p;
  const std::size_t total = spec.n + burn;

  NoiseSpec noise = spec.noise;
  if (noise.scales.size() == 1)
    noise.scales.assign(p, noise.scales.front());
  const std::vector<double> eps = draw_noise(noise, history + total, spec.seed);

  Series out{p, std::vector<double>(spec.n), spec};
  if (spec.generator == Generator::ma_truncated)
    generate_ma(spec, eps, history, burn, out.values);
  else
    generate_ar(spec, eps, out.values);
  return out;
}

} // namespace pmhd
