#include "pmhd/series_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace pmhd {

using nlohmann::json;

std::string format_double(double value)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void check_shape(const Series& series)
{
  if (series.period == 0)
    throw ParseError("series period must be at least 1");
  if (series.values.empty())
    throw ParseError("series is empty");
  if (series.values.size() % series.period != 0)
    throw ParseError("series length " + std::to_string(series.values.size()) +
                     " is not a multiple of p = " + std::to_string(series.period));
}

} // namespace

void write_series_csv(const Series& series, std::ostream& out)
{
  out << "x\n";
  for (double v : series.values)
    out << format_double(v) << '\n';
}

Series read_series_csv(std::istream& in, std::size_t period)
{
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x")
    throw ParseError("series CSV must start with header 'x'");
  Series series{period, {}, std::nullopt};
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto field = trim(line);
    if (field.empty())
      continue;
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || !std::isfinite(v))
      throw ParseError("line " + std::to_string(lineno) + ": not a finite number: '" + std::string(field) + "'");
    series.values.push_back(v);
  }
  check_shape(series);
  return series;
}

std::string series_to_json(const Series& series)
{
  json doc;
  doc["p"] = series.period;
  doc["d"] = series.spec ? series.spec->d : std::vector<double>{};
  doc["values"] = series.values;
  if (series.spec) {
    const ProcessSpec& s = *series.spec;
    doc["noise"] = {{"family", to_string(s.noise.family)}, {"scales", s.noise.scales}};
    doc["seed"] = s.seed;
    doc["truncation"] = s.truncation;
    doc["burn_in"] = s.burn_in;
    doc["generator"] = std::string(to_string(s.generator));
  }
  return doc.dump();
}

Series series_from_json(const std::string& text)
{
  json doc;
  try {
    doc = json::parse(text);
    Series series;
    series.period = doc.at("p").get<std::size_t>();
    series.values = doc.at("values").get<std::vector<double>>();
    check_shape(series);
    if (doc.contains("noise")) {
      ProcessSpec spec;
      spec.period = series.period;
      spec.d = doc.at("d").get<std::vector<double>>();
      spec.noise.family = parse_family(doc["noise"].at("family").get<std::string>());
      spec.noise.scales = doc["noise"].at("scales").get<std::vector<double>>();
      spec.n = series.values.size();
      spec.seed = doc.at("seed").get<std::uint64_t>();
      spec.truncation = doc.value("truncation", kDefaultGenerationTruncation);
      spec.burn_in = doc.value("burn_in", std::size_t{0});
      spec.generator = parse_generator(doc.value("generator", std::string("ar")));
      spec.validate();
      series.spec = std::move(spec);
    }
    return series;
  } catch (const json::exception& e) {
    throw ParseError(std::string("series JSON: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("series JSON: ") + e.what());
  }
}

void save_series(const Series& series, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  if (path.extension() == ".json")
    out << series_to_json(series) << '\n';
  else
    write_series_csv(series, out);
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

Series load_series(const std::filesystem::path& path, std::size_t period)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open '" + path.string() + "'");
  if (path.extension() == ".json") {
    std::stringstream buf;
    buf << in.rdbuf();
    Series s = series_from_json(buf.str());
    if (period != 0 && s.period != period)
      throw ParseError("file has p = " + std::to_string(s.period) + ", expected " + std::to_string(period));
    return s;
  }
  if (period == 0)
    throw ParseError("CSV series needs an explicit period");
  return read_series_csv(in, period);
}

} // namespace pmhd
