#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "hwkb/convergence_harness.hpp"

namespace hwkb {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing: " + std::strerror(errno));
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + file.string());
}

std::string csv_text(const SweepResult& res) {
  std::string s = csv_header();
  s += '\n';
  for (const auto& r : res.records) {
    for (double v : {r.eps, r.t, r.err_l2, r.err_w, r.err_l2w, r.r_norm, r.z2_norm, r.mass_drift}) {
      s += g17(v);
      s += ',';
    }
    s.back() = '\n';
  }
  return s;
}

std::string summary_text(const SweepResult& res, const std::string& config_echo) {
  json j;
  j["config_echo"] = config_echo.empty() ? json(nullptr) : json::parse(config_echo);
  j["beta_expected"] = res.beta_expected;
  j["beta_fitted"] = optional_number(res.beta_fitted);
  j["c_fitted"] = optional_number(res.c_fitted);
  j["fit_residual"] = optional_number(res.fit_residual);
  j["remainder_slope"] = optional_number(res.remainder_slope);
  j["failed_epsilons"] = res.failed_epsilons;
  json checks = json::object();
  for (const auto& [name, c] : res.checks)
    checks[name] = {{"pass", c.pass}, {"margin", optional_number(c.margin)}};
  j["checks"] = checks;
  return j.dump(2) + '\n';
}

struct Axis {
  double lo, hi;
  double map(double v, double a, double b) const { return a + (std::log10(v) - lo) / (hi - lo) * (b - a); }
};

Axis log_axis(double lo, double hi) {
  double a = std::floor(std::log10(lo)), b = std::ceil(std::log10(hi));
  if (a == b) b = a + 1.0;
  return {a, b};
}

std::string svg_text(const SweepResult& res) {
  constexpr double W = 640, H = 480, left = 70, right = 20, top = 20, bottom = 50;
  std::vector<double> times;
  for (const auto& r : res.records)
    if (std::find(times.begin(), times.end(), r.t) == times.end()) times.push_back(r.t);
  std::sort(times.begin(), times.end());

  double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  for (const auto& r : res.records) {
    if (r.err_l2w <= 0.0) continue;
    emin = std::min(emin, r.eps), emax = std::max(emax, r.eps);
    vmin = std::min(vmin, r.err_l2w), vmax = std::max(vmax, r.err_l2w);
  }

  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
     << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">log10 eps</text>\n"
     << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
     << ")\" text-anchor=\"middle\">log10 err_l2w</text>\n";

  if (vmax > 0.0) {
    const Axis xa = log_axis(emin, emax), ya = log_axis(vmin, vmax);
    auto px = [&](double e) { return xa.map(e, left, W - right); };
    auto py = [&](double v) { return ya.map(v, H - bottom, top); };
    for (double d = xa.lo; d <= xa.hi; d += 1.0)
      os << "<text x=\"" << px(std::pow(10.0, d)) << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">" << d
         << "</text>\n";
    for (double d = ya.lo; d <= ya.hi; d += 1.0)
      os << "<text x=\"" << left - 6 << "\" y=\"" << py(std::pow(10.0, d)) << "\" text-anchor=\"end\">" << d
         << "</text>\n";

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    for (std::size_t s = 0; s < times.size(); ++s) {
      os << "<polyline class=\"data\" data-t=\"" << times[s] << "\" fill=\"none\" stroke=\""
         << colors[s % 6] << "\" points=\"";
      for (const auto& r : res.records)
        if (r.t == times[s] && r.err_l2w > 0.0) os << px(r.eps) << ',' << py(r.err_l2w) << ' ';
      os << "\"/>\n";
    }
    if (res.c_fitted) {
      const double c = *res.c_fitted, b = res.beta_expected;
      os << "<line class=\"reference\" stroke=\"gray\" stroke-dasharray=\"6 4\" x1=\"" << px(emin) << "\" y1=\""
         << py(c * std::pow(emin, b)) << "\" x2=\"" << px(emax) << "\" y2=\"" << py(c * std::pow(emax, b))
         << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

const char* csv_header() { return "eps,t,err_l2,err_w,err_l2w,r_norm,z2_norm,mass_drift"; }

void persist(const SweepResult& result, const std::string& config_echo, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_file(dir / "sweep.csv", csv_text(result));
  write_file(dir / "summary.json", summary_text(result, config_echo));
  write_file(dir / "loglog.svg", svg_text(result));
}

std::vector<SweepRecord> read_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw IoError("unexpected CSV header in " + file.string());
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[8];
    const char* p = line.c_str();
    for (int i = 0; i < 8; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p) throw IoError("malformed CSV row in " + file.string() + ": " + line);
      p = *end == ',' ? end + 1 : end;
    }
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]});
  }
  return out;
}

}  // namespace hwkb
