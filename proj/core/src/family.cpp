#include "pmhd/family.hpp"

namespace pmhd {

std::string_view to_string(Family family)
{
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::cauchy:
      return "cauchy";
  }
  return "unknown";
}

Family parse_family(std::string_view name)
{
  if (name == "gaussian" || name == "normal")
    return Family::gaussian;
  if (name == "cauchy")
    return Family::cauchy;
  throw ConfigError("family", "unknown distribution family '" + std::string(name) + "'");
}

} // namespace pmhd
