#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmhd {

/// Distribution family shared by innovations, kernels and reference densities.
enum class Family
{
  gaussian,
  cauchy
};

std::string_view to_string(Family family);

/// Accepts "gaussian"/"normal" and "cauchy" (case-sensitive).
Family parse_family(std::string_view name);

/// Invalid configuration. `field()` names the offending input.
class ConfigError : public std::invalid_argument
{
public:
  ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message)
    , field_(std::move(field))
  {
  }

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Malformed serialized input (CSV / JSON).
class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace pmhd
