#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sff/ensemble.hpp"
#include "sff/stats.hpp"

namespace sff {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Runs the experiment and persists estimate.csv, meta.json and a manifest
/// with content digests into out_dir. All writes are write-temp-then-rename,
/// so an interrupted run leaves no partial artifact. Returns the estimate.
SffEstimate run_experiment(const EnsembleSpec& spec,
                           const std::filesystem::path& out_dir);

/// CSV round trip for persisted estimates (columns t, tau, m, K_mean,
/// K_stderr, kappa, kappa_stderr).
void write_estimate_csv(const SffEstimate& est,
                        const std::filesystem::path& path);
SffEstimate read_estimate_csv(const std::filesystem::path& path);

void write_spec_json(const EnsembleSpec& spec, double wall_seconds,
                     const std::filesystem::path& path);
EnsembleSpec read_spec_json(const std::filesystem::path& path);
/// Applies JSON config fields onto spec; unknown keys are rejected.
void apply_spec_json_text(const std::string& text, EnsembleSpec* spec);

/// Binary eigenphase cache: 8-byte magic "EIGPHS01", u64 little-endian dim,
/// then dim little-endian doubles.
void write_eigenphases(const EigenphaseSet& phases,
                       const std::filesystem::path& path);
EigenphaseSet read_eigenphases(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

struct CollapseReport {
  std::size_t compared = 0;  // number of (pair, tau) comparisons
  std::size_t exceeding = 0; // standardized difference > 3
  double max_standardized = 0.0;
  bool pass = false;         // exceeding fraction below 5%
};

/// Standardized differences |kappa_a - kappa_b| / sqrt(se_a^2 + se_b^2) on
/// the common tau range above tau_min, with linear interpolation in tau;
/// moment order is 1-based.
CollapseReport collapse_check(const std::vector<SffEstimate>& estimates,
                              double tau_min, int moment_order = 1);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool is_overlay = false;  // theory overlays render as black lines
};

enum class PlotStyle { LogLog, Linear };

/// Standalone SVG line plot plus one whitespace-separated .dat companion per
/// series. Vertical dashed guides (e.g. at tau_SH and tau_H) are optional.
void emit_plot(const std::filesystem::path& svg_path,
               const std::vector<PlotSeries>& series, PlotStyle style,
               const std::string& x_label, const std::string& y_label,
               const std::vector<double>& guides_x = {});

}  // namespace sff
