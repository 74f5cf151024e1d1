#pragma once

// Batch experiment driver: flat key = value configuration, deterministic CSV
// output keyed by a config hash, optional SVG renderings of the CSV data.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dynamo/norms.hpp"

namespace dynamo::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<int> alpha{16};
  std::vector<double> eps{1e-3};
  int grid_n = 256;
  std::vector<double> moll_scale{0.02};
  int band = 128;
  std::string shear = "quadrant";  // quadrant | zero
  NormParams norms;
  std::vector<std::uint64_t> seeds{1};
  int periods = 40;
  int flux_steps = 30;
  double tol = 1e-10;
  int max_iter = 5000;
  double c_cal = 100.0;
  std::string out_dir = ".";
  bool plots = false;

  /// Re-checks every module precondition; throws ConfigError.
  void validate() const;
  /// Sorted key = value lines; output directory and plot flag excluded.
  std::string canonical() const;
  std::uint64_t hash() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment; lists are comma or space
/// separated, optionally in brackets.
KeyValues parse_config_text(const std::string& text);
KeyValues read_config_file(const std::filesystem::path& path);
void apply(ExperimentConfig& cfg, const KeyValues& kv);

std::uint64_t fnv1a64(const std::string& s) noexcept;
std::string hex64(std::uint64_t v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const ExperimentConfig& cfg, const std::string& command);
  void header(const std::vector<std::string>& cols);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream os_;
  bool first_ = true;
};

std::string format_double(double v);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line plot; a pure rendering of the supplied series.
void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<Series>& series);

int cmd_map_check(const ExperimentConfig& cfg);
int cmd_limit(const ExperimentConfig& cfg);
int cmd_eigen(const ExperimentConfig& cfg);
int cmd_evolve(const ExperimentConfig& cfg);
int cmd_converge(const ExperimentConfig& cfg);
int cmd_norms(const ExperimentConfig& cfg);
int cmd_flux(const ExperimentConfig& cfg);

/// Entry point used by the executable; returns the process exit code
/// (0 ok, 1 check failure, 2 configuration error).
int run(int argc, char** argv);

}  // namespace dynamo::cli
