#include "sff/experiments.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sff {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json spec_to_json(const EnsembleSpec& spec) {
  json j;
  j["model"] = model_name(spec.model);
  j["N"] = spec.N;
  j["L"] = spec.L;
  j["eps"] = spec.eps;
  j["gamma"] = spec.gamma;
  j["kA"] = spec.kA;
  j["kB"] = spec.kB;
  j["dist"] = spec.dist.name();
  j["realizations"] = spec.realizations;
  j["seed"] = spec.master_seed;
  j["t_max"] = spec.t_max;
  j["moments"] = spec.m_max;
  j["alpha"] = spec.alpha;
  j["workers"] = spec.workers;
  j["solver"] = spec.solver == EigenSolver::CayleyHermitian ? "cayley" : "qr";
  return j;
}

void json_to_spec(const json& j, EnsembleSpec* spec) {
  for (const auto& [key, value] : j.items()) {
    if (key == "model") {
      spec->model = model_from_name(value.get<std::string>());
    } else if (key == "N") {
      spec->N = value.get<int>();
    } else if (key == "L") {
      spec->L = value.get<int>();
    } else if (key == "eps") {
      spec->eps = value.get<double>();
    } else if (key == "gamma") {
      spec->gamma = value.get<double>();
    } else if (key == "kA") {
      spec->kA = value.get<double>();
    } else if (key == "kB") {
      spec->kB = value.get<double>();
    } else if (key == "dist") {
      spec->dist = phase_distribution_from_name(value.get<std::string>());
    } else if (key == "realizations") {
      spec->realizations = value.get<int>();
    } else if (key == "seed") {
      spec->master_seed = value.get<std::uint64_t>();
    } else if (key == "t_max") {
      spec->t_max = value.get<std::int64_t>();
    } else if (key == "moments") {
      spec->m_max = value.get<int>();
    } else if (key == "alpha") {
      spec->alpha = value.get<double>();
    } else if (key == "workers") {
      spec->workers = value.get<int>();
    } else if (key == "solver") {
      const auto s = value.get<std::string>();
      if (s == "cayley") {
        spec->solver = EigenSolver::CayleyHermitian;
      } else if (s == "qr") {
        spec->solver = EigenSolver::DenseQr;
      } else {
        throw std::invalid_argument("config field solver: unknown value " + s);
      }
    } else if (key == "wall_seconds" || key == "version") {
      // metadata written by run_experiment; ignored on load
    } else {
      throw std::invalid_argument("unknown config field: " + key);
    }
  }
}

}  // namespace

void write_estimate_csv(const SffEstimate& est, const fs::path& path) {
  std::ostringstream out;
  out << "t,tau,m,K_mean,K_stderr,kappa,kappa_stderr\n";
  for (int m = 1; m <= est.m_max; ++m) {
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      out << est.grid.times[i] << ',' << format_double(est.tau[i]) << ',' << m
          << ',' << format_double(est.k_mean(row, m - 1)) << ','
          << format_double(est.k_stderr(row, m - 1)) << ','
          << format_double(est.kappa(row, m - 1)) << ','
          << format_double(est.kappa_stderr(row, m - 1)) << '\n';
    }
  }
  atomic_write(path, out.str());
}

SffEstimate read_estimate_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) ||
      line != "t,tau,m,K_mean,K_stderr,kappa,kappa_stderr") {
    throw std::runtime_error("bad CSV header in " + path.string());
  }
  std::vector<std::array<double, 7>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 7> r{};
    std::size_t pos = 0;
    for (int f = 0; f < 7; ++f) {
      const std::size_t next = line.find(',', pos);
      const std::string tok = line.substr(pos, next - pos);
      r[static_cast<std::size_t>(f)] = std::stod(tok);
      pos = next == std::string::npos ? line.size() : next + 1;
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error("empty CSV " + path.string());
  SffEstimate est;
  est.m_max = static_cast<int>(rows.back()[2]);
  const std::size_t npts = rows.size() / static_cast<std::size_t>(est.m_max);
  est.k_mean.resize(static_cast<Eigen::Index>(npts), est.m_max);
  est.k_stderr.resize(static_cast<Eigen::Index>(npts), est.m_max);
  est.kappa.resize(static_cast<Eigen::Index>(npts), est.m_max);
  est.kappa_stderr.resize(static_cast<Eigen::Index>(npts), est.m_max);
  est.tau.resize(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    est.grid.times.push_back(static_cast<std::int64_t>(rows[i][0]));
    est.tau[i] = rows[i][1];
  }
  for (const auto& r : rows) {
    const int m = static_cast<int>(r[2]);
    const auto it = std::lower_bound(est.grid.times.begin(),
                                     est.grid.times.end(),
                                     static_cast<std::int64_t>(r[0]));
    const auto row = static_cast<Eigen::Index>(
        std::distance(est.grid.times.begin(), it));
    est.k_mean(row, m - 1) = r[3];
    est.k_stderr(row, m - 1) = r[4];
    est.kappa(row, m - 1) = r[5];
    est.kappa_stderr(row, m - 1) = r[6];
  }
  return est;
}

void write_spec_json(const EnsembleSpec& spec, double wall_seconds,
                     const fs::path& path) {
  json j = spec_to_json(spec);
  j["wall_seconds"] = wall_seconds;
  j["version"] = "sff 1.0.0";
  atomic_write(path, j.dump(2) + "\n");
}

EnsembleSpec read_spec_json(const fs::path& path) {
  EnsembleSpec spec;
  apply_spec_json_text(read_file(path), &spec);
  return spec;
}

void apply_spec_json_text(const std::string& text, EnsembleSpec* spec) {
  json_to_spec(json::parse(text), spec);
}

void write_eigenphases(const EigenphaseSet& phases, const fs::path& path) {
  static_assert(std::endian::native == std::endian::little,
                "eigenphase dump assumes a little-endian host");
  std::string buf;
  buf.reserve(16 + 8 * static_cast<std::size_t>(phases.dim()));
  buf.append("EIGPHS01", 8);
  const auto dim = static_cast<std::uint64_t>(phases.dim());
  buf.append(reinterpret_cast<const char*>(&dim), 8);
  buf.append(reinterpret_cast<const char*>(phases.phases.data()),
             8 * static_cast<std::size_t>(phases.dim()));
  atomic_write(path, buf);
}

EigenphaseSet read_eigenphases(const fs::path& path) {
  const std::string buf = read_file(path);
  if (buf.size() < 16 || buf.compare(0, 8, "EIGPHS01") != 0) {
    throw std::runtime_error("bad eigenphase file " + path.string());
  }
  std::uint64_t dim = 0;
  std::memcpy(&dim, buf.data() + 8, 8);
  if (buf.size() != 16 + 8 * dim) {
    throw std::runtime_error("truncated eigenphase file " + path.string());
  }
  EigenphaseSet out;
  out.phases.resize(static_cast<Eigen::Index>(dim));
  std::memcpy(out.phases.data(), buf.data() + 16, 8 * dim);
  return out;
}

std::string file_digest(const fs::path& path) {
  const std::string data = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

SffEstimate run_experiment(const EnsembleSpec& spec, const fs::path& out_dir) {
  spec.validate();
  fs::create_directories(out_dir);
  const auto start = std::chrono::steady_clock::now();
  SffEstimate est = estimate_sff(spec);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_estimate_csv(est, out_dir / "estimate.csv");
  write_spec_json(spec, wall, out_dir / "meta.json");
  std::ostringstream manifest;
  for (const char* name : {"estimate.csv", "meta.json"}) {
    manifest << file_digest(out_dir / name) << "  " << name << '\n';
  }
  atomic_write(out_dir / "manifest.txt", manifest.str());
  return est;
}

namespace {

double interp(const std::vector<double>& xs, const Eigen::MatrixXd& ys,
              int col, double x) {
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys(0, col);
  if (it == xs.end()) return ys(ys.rows() - 1, col);
  const auto hi = static_cast<Eigen::Index>(std::distance(xs.begin(), it));
  const auto lo = hi - 1;
  const double f = (x - xs[static_cast<std::size_t>(lo)]) /
                   (xs[static_cast<std::size_t>(hi)] -
                    xs[static_cast<std::size_t>(lo)]);
  return (1.0 - f) * ys(lo, col) + f * ys(hi, col);
}

}  // namespace

CollapseReport collapse_check(const std::vector<SffEstimate>& estimates,
                              double tau_min, int moment_order) {
  if (estimates.size() < 2) {
    throw std::invalid_argument("collapse_check: need >= 2 estimates");
  }
  const int col = moment_order - 1;
  CollapseReport report;
  for (std::size_t a = 0; a < estimates.size(); ++a) {
    for (std::size_t b = a + 1; b < estimates.size(); ++b) {
      const auto& ea = estimates[a];
      const auto& eb = estimates[b];
      if (col >= ea.m_max || col >= eb.m_max) {
        throw std::invalid_argument("collapse_check: moment order missing");
      }
      const double lo = std::max({tau_min, ea.tau.front(), eb.tau.front()});
      const double hi = std::min(ea.tau.back(), eb.tau.back());
      if (!(lo < hi)) {
        throw std::domain_error("collapse_check: tau grids do not overlap");
      }
      for (std::size_t i = 0; i < ea.tau.size(); ++i) {
        const double tau = ea.tau[i];
        if (tau < lo || tau > hi) continue;
        const double ka = ea.kappa(static_cast<Eigen::Index>(i), col);
        const double sa = ea.kappa_stderr(static_cast<Eigen::Index>(i), col);
        const double kb = interp(eb.tau, eb.kappa, col, tau);
        const double sb = interp(eb.tau, eb.kappa_stderr, col, tau);
        const double se = std::sqrt(sa * sa + sb * sb);
        const double z = se > 0 ? std::abs(ka - kb) / se : 0.0;
        report.max_standardized = std::max(report.max_standardized, z);
        ++report.compared;
        if (z > 3.0) ++report.exceeding;
      }
    }
  }
  report.pass = report.compared > 0 &&
                static_cast<double>(report.exceeding) <
                    0.05 * static_cast<double>(report.compared);
  return report;
}

namespace {

constexpr int kW = 760;
constexpr int kH = 520;
constexpr int kMargin = 60;

double map_coord(double v, double lo, double hi, double outlo, double outhi,
                 bool log_scale) {
  if (log_scale) {
    v = std::log10(std::max(v, 1e-300));
    lo = std::log10(std::max(lo, 1e-300));
    hi = std::log10(std::max(hi, 1e-300));
  }
  return outlo + (v - lo) / (hi - lo) * (outhi - outlo);
}

const char* series_color(std::size_t i) {
  static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return colors[i % 8];
}

}  // namespace

void emit_plot(const fs::path& svg_path, const std::vector<PlotSeries>& series,
               PlotStyle style, const std::string& x_label,
               const std::string& y_label, const std::vector<double>& guides_x) {
  if (series.empty()) throw std::invalid_argument("emit_plot: no series");
  const bool logs = style == PlotStyle::LogLog;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (logs && (s.x[i] <= 0 || s.y[i] <= 0)) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!(xlo < xhi)) xhi = xlo + 1;
  if (!(ylo < yhi)) yhi = ylo + 1;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kW - 2 * kMargin << "\" height=\"" << kH - 2 * kMargin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto px = [&](double x) {
    return map_coord(x, xlo, xhi, kMargin, kW - kMargin, logs);
  };
  auto py = [&](double y) {
    return map_coord(y, ylo, yhi, kH - kMargin, kMargin, logs);
  };
  for (const double g : guides_x) {
    if (g < xlo || g > xhi) continue;
    svg << "<line x1=\"" << px(g) << "\" y1=\"" << kMargin << "\" x2=\""
        << px(g) << "\" y2=\"" << kH - kMargin
        << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  }
  std::size_t color_idx = 0;
  int legend_line = 0;
  for (const auto& s : series) {
    const std::string color = s.is_overlay ? "black" : series_color(color_idx++);
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << (s.is_overlay ? "1.2" : "1.6") << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (logs && (s.x[i] <= 0 || s.y[i] <= 0)) continue;
      svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << kW - kMargin - 180 << "\" y=\""
        << kMargin + 16 + 16 * legend_line++ << "\" fill=\"" << color
        << "\" font-size=\"12\">" << s.label << "</text>\n";
  }
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 16
      << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label
      << "</text>\n"
      << "<text x=\"18\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
         "18 "
      << kH / 2 << ")\">" << y_label << "</text>\n"
      << "<text x=\"" << kMargin << "\" y=\"" << kH - kMargin + 16
      << "\" font-size=\"11\">" << format_double(xlo) << "</text>\n"
      << "<text x=\"" << kW - kMargin << "\" y=\"" << kH - kMargin + 16
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(xhi)
      << "</text>\n"
      << "<text x=\"" << kMargin - 4 << "\" y=\"" << kH - kMargin
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ylo)
      << "</text>\n"
      << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(yhi)
      << "</text>\n</svg>\n";
  atomic_write(svg_path, svg.str());

  // Companion data files, one per series, for external plotting.
  int idx = 0;
  for (const auto& s : series) {
    std::ostringstream dat;
    dat << "# " << s.label << "\n# x y\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      dat << format_double(s.x[i]) << ' ' << format_double(s.y[i]) << '\n';
    }
    fs::path dat_path = svg_path;
    dat_path.replace_extension("series" + std::to_string(idx++) + ".dat");
    atomic_write(dat_path, dat.str());
  }
}

}  // namespace sff
