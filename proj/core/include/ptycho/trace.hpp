#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ptycho {

// One per-sweep metric record. Metric fields may be NaN (no ground truth) or
// +inf (exact match PSNR); the CSV writer renders those as empty and 99.
struct TraceRow {
  std::size_t iteration = 0;  // 1-based sweep index over the whole run
  std::string stage;          // "pft" or "fft"
  double wall_s = 0.0;        // cumulative wall time
  double objective = 0.0;
  double rel_err = 0.0;
  double rel_err_mag = 0.0;
  double rel_err_phase = 0.0;
  double ssim_mag = 0.0;
  double ssim_phase = 0.0;
  double psnr_mag = 0.0;
  double psnr_phase = 0.0;
  double rel_err_aligned = 0.0;
};

class MetricTrace {
 public:
  void append(TraceRow row);  // iterations must increase strictly
  const std::vector<TraceRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  void save_csv(const std::filesystem::path& path) const;
  static MetricTrace load_csv(const std::filesystem::path& path);

  // Field-wise equality ignoring wall_s; the replay-determinism checks use it.
  bool equal_excluding_wall(const MetricTrace& other) const;

 private:
  std::vector<TraceRow> rows_;
};

}  // namespace ptycho
