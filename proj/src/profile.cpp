#include "orcon/profile.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "orcon/errors.hpp"

namespace orcon::profile {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool inQuotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (inQuotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        inQuotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      inQuotes = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s) {
  if (s == "inf") return kInf;
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc())
    throw IoFailure("read_results_csv: bad numeric field '" + s + "'");
  return v;
}

std::string stages_field(const std::vector<StageTrace>& stages) {
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i) out += '|';
    out += format_double(stages[i].t);
    out += ':';
    out += to_string(stages[i].innerStatus);
    out += ':';
    out += std::to_string(stages[i].innerIterations);
    out += ':';
    out += format_double(stages[i].fValue);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double q_metric(const RunResult& result, double fMin, double delta, double feasTol) {
  if (delta < 0) throw InvalidArgument("q_metric: delta must be nonnegative");
  if (result.maxOrViolation > feasTol || result.maxGhViolation > feasTol) return kInf;
  return result.fValue - fMin + delta;
}

ProfileTable build_table(const std::vector<std::vector<RunResult>>& results,
                         const std::vector<MethodId>& methods, double delta,
                         double fMin, double feasTol) {
  ProfileTable table;
  table.methods = methods;
  table.delta = delta;
  table.fMin = fMin;
  table.feasTol = feasTol;
  table.numStarts = results.empty() ? 0 : static_cast<int>(results[0].size());
  table.qValues.resize(table.numStarts, methods.size());
  for (std::size_t a = 0; a < results.size(); ++a)
    for (int s = 0; s < table.numStarts; ++s)
      table.qValues(s, a) = q_metric(results[a][s], fMin, delta, feasTol);
  return table;
}

Eigen::MatrixXd ratios(const ProfileTable& table) {
  if (table.methods.empty()) throw InvalidArgument("ratios: table has no methods");
  Eigen::MatrixXd r(table.qValues.rows(), table.qValues.cols());
  for (int s = 0; s < r.rows(); ++s) {
    const double rowMin = table.qValues.row(s).minCoeff();
    if (!std::isfinite(rowMin)) {
      r.row(s).setConstant(kInf);
      continue;
    }
    for (int a = 0; a < r.cols(); ++a) r(s, a) = table.qValues(s, a) / rowMin;
  }
  return r;
}

Eigen::VectorXd rho_curve(const Eigen::MatrixXd& r, int methodColumn,
                          const Eigen::VectorXd& tauGrid) {
  for (int i = 0; i + 1 < tauGrid.size(); ++i)
    if (tauGrid[i + 1] <= tauGrid[i])
      throw InvalidArgument("rho_curve: tau grid must be increasing");
  if (tauGrid.size() > 0 && tauGrid[0] < 1)
    throw InvalidArgument("rho_curve: tau grid must start at >= 1");
  Eigen::VectorXd rho(tauGrid.size());
  const int ns = static_cast<int>(r.rows());
  for (int k = 0; k < tauGrid.size(); ++k) {
    int count = 0;
    for (int s = 0; s < ns; ++s)
      if (r(s, methodColumn) <= tauGrid[k]) ++count;
    rho[k] = ns > 0 ? static_cast<double>(count) / ns : 0.0;
  }
  return rho;
}

Eigen::VectorXd default_tau_grid(const Eigen::MatrixXd& r, int points) {
  double maxFinite = 1.0;
  for (int s = 0; s < r.rows(); ++s)
    for (int a = 0; a < r.cols(); ++a)
      if (std::isfinite(r(s, a))) maxFinite = std::max(maxFinite, r(s, a));
  maxFinite = std::min(maxFinite, 1e6);
  const double hi = std::max(maxFinite, 10.0);
  Eigen::VectorXd grid(points);
  for (int k = 0; k < points; ++k)
    grid[k] = std::pow(hi, static_cast<double>(k) / (points - 1));
  grid[0] = 1.0;
  return grid;
}

Curves build_curves(const ProfileTable& table, int points) {
  const Eigen::MatrixXd r = ratios(table);
  Curves curves;
  curves.tauGrid = default_tau_grid(r, points);
  curves.rho.resize(curves.tauGrid.size(), table.methods.size());
  for (std::size_t a = 0; a < table.methods.size(); ++a)
    curves.rho.col(a) = rho_curve(r, static_cast<int>(a), curves.tauGrid);
  return curves;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("emit: cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoFailure("emit: write to '" + path + "' failed");
}

std::string svg_chart(const ProfileTable& table, const Curves& curves) {
  // Static SVG 1.1 line chart of rho_a over log10(tau).
  const int width = 640, height = 440, left = 60, right = 170, top = 30, bottom = 50;
  const double plotW = width - left - right, plotH = height - top - bottom;
  const double logMax =
      std::max(1e-9, std::log10(curves.tauGrid[curves.tauGrid.size() - 1]));
  const auto xPix = [&](double tau) {
    return left + plotW * std::log10(std::max(tau, 1.0)) / logMax;
  };
  const auto yPix = [&](double rho) { return top + plotH * (1.0 - rho); };
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                           "#8c564b", "#e377c2"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  // Axes and y grid lines.
  for (int i = 0; i <= 4; ++i) {
    const double rho = 0.25 * i;
    const double y = yPix(rho);
    svg << "<line x1=\"" << left << "\" y1=\"" << format_double(y) << "\" x2=\""
        << format_double(left + plotW) << "\" y2=\"" << format_double(y)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << format_double(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(rho)
        << "</text>\n";
  }
  for (int e = 0;; ++e) {
    const double tau = std::pow(10.0, e);
    if (std::log10(tau) > logMax + 1e-12) break;
    const double x = xPix(tau);
    svg << "<line x1=\"" << format_double(x) << "\" y1=\"" << top << "\" x2=\""
        << format_double(x) << "\" y2=\"" << format_double(top + plotH)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << format_double(x) << "\" y=\""
        << format_double(top + plotH + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
      << format_double(plotW) << "\" height=\"" << format_double(plotH)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << format_double(left + plotW / 2) << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">tau (log scale)</text>\n";
  svg << "<text x=\"18\" y=\"" << format_double(top + plotH / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << format_double(top + plotH / 2) << ")\">rho(tau)</text>\n";

  for (std::size_t a = 0; a < table.methods.size(); ++a) {
    svg << "<polyline fill=\"none\" stroke=\"" << palette[a % 7]
        << "\" stroke-width=\"1.5\" points=\"";
    for (int k = 0; k < curves.tauGrid.size(); ++k) {
      if (k) svg << ' ';
      svg << format_double(xPix(curves.tauGrid[k])) << ','
          << format_double(yPix(curves.rho(k, a)));
    }
    svg << "\"/>\n";
    const double ly = top + 16.0 * a + 8;
    svg << "<line x1=\"" << format_double(left + plotW + 10) << "\" y1=\""
        << format_double(ly) << "\" x2=\"" << format_double(left + plotW + 34)
        << "\" y2=\"" << format_double(ly) << "\" stroke=\"" << palette[a % 7]
        << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << format_double(left + plotW + 40) << "\" y=\""
        << format_double(ly + 4) << "\" font-size=\"12\">" << to_string(table.methods[a])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void emit(const std::vector<std::vector<RunResult>>& results,
          const std::vector<std::vector<std::string>>& strongest,
          const ProfileTable& table, const Curves& curves, const EmitPaths& paths) {
  if (!paths.resultsCsv.empty()) {
    std::string csv =
        "method,start,f_value,max_or_violation,max_gh_violation,feasible,stages,"
        "wall_time_seconds,strongest_class\r\n";
    for (std::size_t a = 0; a < results.size(); ++a)
      for (std::size_t s = 0; s < results[a].size(); ++s) {
        const RunResult& r = results[a][s];
        csv += csv_field(to_string(r.method));
        csv += ',' + std::to_string(s);
        csv += ',' + format_double(r.fValue);
        csv += ',' + format_double(r.maxOrViolation);
        csv += ',' + format_double(r.maxGhViolation);
        csv += ',';
        csv += r.feasible ? "1" : "0";
        csv += ',' + csv_field(stages_field(r.stages));
        csv += ',' + format_double(r.wallTimeSeconds);
        csv += ',';
        if (!strongest.empty()) csv += csv_field(strongest[a][s]);
        csv += "\r\n";
      }
    write_file(paths.resultsCsv, csv);
  }

  if (!paths.profileCsv.empty()) {
    std::string csv = "tau";
    for (MethodId m : table.methods) csv += ',' + csv_field(to_string(m));
    csv += "\r\n";
    for (int k = 0; k < curves.tauGrid.size(); ++k) {
      csv += format_double(curves.tauGrid[k]);
      for (int a = 0; a < curves.rho.cols(); ++a)
        csv += ',' + format_double(curves.rho(k, a));
      csv += "\r\n";
    }
    write_file(paths.profileCsv, csv);
  }

  if (!paths.svg.empty()) write_file(paths.svg, svg_chart(table, curves));
}

ParsedResults read_results_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("read_results_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoFailure("read_results_csv: empty file");

  ParsedResults out;
  std::vector<std::pair<MethodId, int>> order;  // method, running start count
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 9) throw IoFailure("read_results_csv: short row");
    const auto method = method_from_string(fields[0]);
    if (!method) throw IoFailure("read_results_csv: unknown method '" + fields[0] + "'");
    RunResult r;
    r.method = *method;
    r.fValue = parse_double(fields[2]);
    r.maxOrViolation = parse_double(fields[3]);
    r.maxGhViolation = parse_double(fields[4]);
    r.feasible = fields[5] == "1";
    r.wallTimeSeconds = parse_double(fields[7]);

    std::size_t idx = out.methods.size();
    for (std::size_t a = 0; a < out.methods.size(); ++a)
      if (out.methods[a] == *method) {
        idx = a;
        break;
      }
    if (idx == out.methods.size()) {
      out.methods.push_back(*method);
      out.results.emplace_back();
      out.strongest.emplace_back();
    }
    out.results[idx].push_back(std::move(r));
    out.strongest[idx].push_back(fields[8]);
  }
  return out;
}

}  // namespace orcon::profile
