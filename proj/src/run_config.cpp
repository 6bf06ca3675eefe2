#include "hwkb/run_config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hwkb {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing required key \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) throw ConfigError(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array()) throw ConfigError(std::string("\"") + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string("\"") + key + "\" must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Vec3 vector_of(const json& j, const char* key, int dim) {
  const auto v = numbers(j, key);
  if (static_cast<int>(v.size()) != dim)
    throw ConfigError(std::string("\"") + key + "\" must have " + std::to_string(dim) + " components");
  Vec3 out{0.0, 0.0, 0.0};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  const int dim = integer(j, "dimension");
  if (dim < 1 || dim > 3) throw ConfigError("\"dimension\" must be 1, 2 or 3");
  const double gamma = number(j, "gamma");
  if (!(gamma > 0.0 && gamma < dim)) throw ConfigError("\"gamma\" must satisfy 0 < gamma < d (the dimension)");

  SweepConfig c;
  c.kernel = KernelSpec::make(dim, gamma, number(j, "lambda"));
  c.box_length = number(j, "box_length");
  c.points = integer(j, "points");
  if (!(c.box_length > 0.0)) throw ConfigError("\"box_length\" must be positive");

  const json& modes = require(j, "modes");
  if (!modes.is_array() || modes.empty()) throw ConfigError("\"modes\" must be a nonempty array");
  for (const auto& m : modes) {
    ModeDescription d;
    d.kappa = vector_of(m, "kappa", dim);
    const json& p = require(m, "profile");
    const json& type = require(p, "type");
    if (!type.is_string() || type.get<std::string>() != "gaussian")
      throw ConfigError("profile \"type\" must be \"gaussian\"");
    d.profile.amplitude = number(p, "amplitude");
    d.profile.center = vector_of(p, "center", dim);
    d.profile.width = number(p, "width");
    if (!(d.profile.width > 0.0)) throw ConfigError("profile \"width\" must be positive");
    c.modes.push_back(d);
  }

  c.epsilons = numbers(j, "epsilons");
  c.final_time = number(j, "final_time");
  c.sample_times = numbers(j, "sample_times");
  if (j.contains("dt_factor")) c.dt_factor = number(j, "dt_factor");
  if (j.contains("quadrature_nodes")) c.quadrature_nodes = integer(j, "quadrature_nodes");
  const json& out = require(j, "output");
  if (!out.is_string()) throw ConfigError("\"output\" must be a string");
  c.output = out.get<std::string>();

  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return RunConfig{c, j.dump()};
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hwkb
