#include "ptycho/trace.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ptycho {
namespace {

constexpr const char* kHeader =
    "iteration,stage,wall_s,objective,rel_err,rel_err_mag,rel_err_phase,"
    "ssim_mag,ssim_phase,psnr_mag,psnr_phase,rel_err_aligned";

std::string fmt(double v, bool cap_psnr) {
  if (std::isnan(v)) return "";
  if (cap_psnr && std::isinf(v) && v > 0) return "99";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_cell(const std::string& s) {
  if (s.empty()) return std::nan("");
  return std::strtod(s.c_str(), nullptr);
}

bool bits_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

void MetricTrace::append(TraceRow row) {
  if (row.stage != "pft" && row.stage != "fft")
    throw std::invalid_argument("MetricTrace: stage must be \"pft\" or \"fft\"");
  if (!rows_.empty() && row.iteration <= rows_.back().iteration)
    throw std::invalid_argument("MetricTrace: iterations must increase strictly");
  rows_.push_back(std::move(row));
}

void MetricTrace::save_csv(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << kHeader << "\n";
  for (const auto& r : rows_) {
    os << r.iteration << "," << r.stage << "," << fmt(r.wall_s, false) << ","
       << fmt(r.objective, false) << "," << fmt(r.rel_err, false) << ","
       << fmt(r.rel_err_mag, false) << "," << fmt(r.rel_err_phase, false) << ","
       << fmt(r.ssim_mag, false) << "," << fmt(r.ssim_phase, false) << ","
       << fmt(r.psnr_mag, true) << "," << fmt(r.psnr_phase, true) << ","
       << fmt(r.rel_err_aligned, false) << "\n";
  }
  if (!os) throw std::runtime_error("write failure on " + path.string());
}

MetricTrace MetricTrace::load_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != kHeader)
    throw std::runtime_error(path.string() + " is not a metric trace");

  MetricTrace trace;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(iss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 12) throw std::runtime_error("malformed trace row in " + path.string());

    TraceRow r;
    r.iteration = std::stoull(cells[0]);
    r.stage = cells[1];
    r.wall_s = parse_cell(cells[2]);
    r.objective = parse_cell(cells[3]);
    r.rel_err = parse_cell(cells[4]);
    r.rel_err_mag = parse_cell(cells[5]);
    r.rel_err_phase = parse_cell(cells[6]);
    r.ssim_mag = parse_cell(cells[7]);
    r.ssim_phase = parse_cell(cells[8]);
    r.psnr_mag = parse_cell(cells[9]);
    r.psnr_phase = parse_cell(cells[10]);
    r.rel_err_aligned = parse_cell(cells[11]);
    trace.append(std::move(r));
  }
  return trace;
}

bool MetricTrace::equal_excluding_wall(const MetricTrace& other) const {
  if (rows_.size() != other.rows_.size()) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& a = rows_[i];
    const auto& b = other.rows_[i];
    if (a.iteration != b.iteration || a.stage != b.stage) return false;
    if (!bits_equal(a.objective, b.objective) || !bits_equal(a.rel_err, b.rel_err) ||
        !bits_equal(a.rel_err_mag, b.rel_err_mag) ||
        !bits_equal(a.rel_err_phase, b.rel_err_phase) ||
        !bits_equal(a.ssim_mag, b.ssim_mag) || !bits_equal(a.ssim_phase, b.ssim_phase) ||
        !bits_equal(a.psnr_mag, b.psnr_mag) || !bits_equal(a.psnr_phase, b.psnr_phase) ||
        !bits_equal(a.rel_err_aligned, b.rel_err_aligned))
      return false;
  }
  return true;
}

}  // namespace ptycho
