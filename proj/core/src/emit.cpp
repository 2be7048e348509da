#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "orecov/error.hpp"
#include "orecov/harness.hpp"
#include "orecov/io.hpp"
#include "orecov/rng.hpp"

namespace orecov {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json fit_json(const RateFit& fit) {
  return {{"slope", fit.slope},
          {"log_exponent", fit.log_exponent},
          {"residual", fit.residual},
          {"with_log_term", fit.with_log_term},
          {"count", fit.count}};
}

}  // namespace

std::string rate_csv(const std::vector<RatePoint>& points) {
  std::string out = "n,N,m,error,C1,C2\n";
  for (const RatePoint& p : points) {
    out += std::to_string(p.n) + ',' + std::to_string(p.N) + ',' + std::to_string(p.m) + ',' +
           fmt(p.error) + ',' + fmt(p.C1) + ',' + fmt(p.C2) + '\n';
  }
  return out;
}

std::vector<RatePoint> parse_rate_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "n,N,m,error,C1,C2") {
    throw InvalidArgument("rate csv: missing header n,N,m,error,C1,C2");
  }
  std::vector<RatePoint> points;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    RatePoint p;
    unsigned long long big_n = 0;
    unsigned long long m = 0;
    char tail = 0;
    const int got = std::sscanf(line.c_str(), "%d,%llu,%llu,%lf,%lf,%lf%c", &p.n, &big_n, &m,
                                &p.error, &p.C1, &p.C2, &tail);
    if (got != 6) {
      throw InvalidArgument("rate csv: malformed line " + std::to_string(lineno));
    }
    p.N = big_n;
    p.m = m;
    points.push_back(p);
  }
  return points;
}

std::string rate_svg(const std::vector<RatePoint>& points, double reference_slope,
                     const std::string& title) {
  constexpr double kW = 480, kH = 360, kPad = 50;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";
  std::vector<std::pair<double, double>> xy;
  for (const RatePoint& p : points) {
    if (p.N > 0 && p.error > 0) xy.emplace_back(std::log10(double(p.N)), std::log10(p.error));
  }
  if (!xy.empty()) {
    double x0 = xy.front().first, x1 = x0, y0 = xy.front().second, y1 = y0;
    for (auto [x, y] : xy) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
    if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
    // Reference line through the first point.
    const double ry0 = xy.front().second + reference_slope * (x0 - xy.front().first);
    const double ry1 = xy.front().second + reference_slope * (x1 - xy.front().first);
    y0 = std::min({y0, ry0, ry1}), y1 = std::max({y1, ry0, ry1});
    if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
    auto sx = [&](double x) { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); };
    auto sy = [&](double y) { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); };
    svg << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad
        << "\" y2=\"" << kH - kPad << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad << "\" y2=\""
        << kH - kPad << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">log10 N</text>\n"
        << "<text x=\"14\" y=\"" << kH / 2
        << "\" font-size=\"12\" transform=\"rotate(-90 14 " << kH / 2
        << ")\">log10 error</text>\n";
    svg << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(ry0) << "\" x2=\"" << sx(x1)
        << "\" y2=\"" << sy(ry1) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
    for (auto [x, y] : xy) svg << sx(x) << ',' << sy(y) << ' ';
    svg << "\"/>\n";
    for (auto [x, y] : xy) {
      svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y)
          << "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

EmittedFiles emit(const SweepResult& result, const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.out_dir.string() + ": " + ec.message());
  const std::string name = cfg.run_name();
  EmittedFiles files{cfg.out_dir / (name + ".csv"), cfg.out_dir / (name + ".json"),
                     cfg.out_dir / (name + ".svg")};

  write_text(files.csv, rate_csv(result.points));

  nlohmann::json manifest;
  manifest["config"] = to_json(cfg);
  nlohmann::json seeds = nlohmann::json::object();
  for (int n : cfg.n_list) {
    seeds[std::to_string(n)] = derive_seed(cfg.seed, static_cast<std::uint64_t>(n));
  }
  manifest["seeds"] = seeds;
  manifest["details"] = result.details;
  nlohmann::json failures = nlohmann::json::array();
  for (const SweepFailure& f : result.failures) {
    failures.push_back({{"n", f.n}, {"reason", f.reason}});
  }
  manifest["failures"] = failures;
  manifest["predicted_slope"] = predicted_slope(cfg);
  manifest["predicted_log_exponent"] = predicted_log_exponent(cfg);
  if (result.points.size() >= 3) {
    manifest["fit_slope_only"] = fit_json(fit_rate(result.points, false));
    if (result.points.size() >= 4) {
      manifest["fit_with_log"] = fit_json(fit_rate(result.points, true));
    }
    manifest["log_term_preferred"] = use_log_term(cfg, result.points);
    const RateCheck check = check_rate(cfg, result.points);
    manifest["rate_check"] = {{"passes", check.passes}, {"criterion", check.criterion}};
  }
  // Results do not depend on the worker count; it is recorded for the log only.
  manifest["workers"] = result.workers;
  write_json_file(files.manifest, manifest);

  write_text(files.svg, rate_svg(result.points, predicted_slope(cfg),
                                 to_string(cfg.class_id) + " d=" + std::to_string(cfg.d)));
  return files;
}

}  // namespace orecov
