#include "ptycho/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ptycho/fft.hpp"
#include "ptycho/raw_io.hpp"

namespace ptycho {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string index_name(const char* stem, std::size_t j) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.ptyr", stem, j);
  return buf;
}

}  // namespace

ComplexField default_probe(const ScanPattern& sp) {
  const std::size_t wr = sp.window_rows, wc = sp.window_cols;
  ComplexField probe(wr, wc);
  const double cr = (static_cast<double>(wr) - 1.0) / 2.0;
  const double cc = (static_cast<double>(wc) - 1.0) / 2.0;
  const double rmax = std::min(cr, cc) + 0.5;
  const double sigma = 0.5 * rmax;
  for (std::size_t i = 0; i < wr; ++i) {
    for (std::size_t k = 0; k < wc; ++k) {
      const double di = static_cast<double>(i) - cr;
      const double dk = static_cast<double>(k) - cc;
      const double rho2 = di * di + dk * dk;
      // The amplitude floor keeps every illuminated pixel updating at a
      // useful rate; a bare Gaussian stalls the window corners.
      const double amp = 0.30 + 0.70 * std::exp(-rho2 / (2.0 * sigma * sigma));
      const double ph = (kPi / 6.0) * rho2 / (rmax * rmax);
      probe(i, k) = sp.mask(i, k) * std::polar(amp, ph);
    }
  }
  return probe;
}

MeasurementSet simulate(const ComplexField& truth_frame, const ComplexField& probe,
                        const ScanPattern& sp) {
  if (truth_frame.rows() != sp.frame_rows || truth_frame.cols() != sp.frame_cols)
    throw std::invalid_argument("simulate: truth frame shape must match the pattern");
  if (probe.rows() != sp.window_rows || probe.cols() != sp.window_cols)
    throw std::invalid_argument("simulate: probe shape must match the window");

  MeasurementSet ms;
  ms.window_rows = sp.window_rows;
  ms.window_cols = sp.window_cols;
  ms.d.reserve(sp.count());
  for (std::size_t j = 0; j < sp.count(); ++j) {
    ComplexField exit = window_slice(truth_frame, sp, j);
    for (std::size_t i = 0; i < exit.rows() * exit.cols(); ++i) exit[i] *= probe[i];
    ms.d.push_back(magnitude(fast_fft2(exit)));
  }
  return ms;
}

void add_poisson_noise(MeasurementSet& ms, double scale, std::uint64_t seed) {
  if (!(scale > 0.0)) throw std::invalid_argument("add_poisson_noise: need scale > 0");
  std::mt19937_64 rng(seed);
  for (auto& d : ms.d) {
    for (std::size_t i = 0; i < d.rows() * d.cols(); ++i) {
      std::poisson_distribution<long long> pois(scale * d[i] * d[i]);
      d[i] = std::sqrt(static_cast<double>(pois(rng)) / scale);
    }
  }
  ms.noise_scale = scale;
  ms.noise_seed = seed;
  if (!ms.d_crop.empty()) build_cropped(ms, ms.mt1, ms.mt2);
}

void build_cropped(MeasurementSet& ms, std::size_t mt1, std::size_t mt2) {
  if (mt1 == 0 || mt2 == 0 || 2 * mt1 > ms.window_rows || 2 * mt2 > ms.window_cols)
    throw std::invalid_argument("build_cropped: band must satisfy 0 < 2*mt <= window");
  ms.mt1 = mt1;
  ms.mt2 = mt2;
  ms.d_crop.clear();
  ms.d_crop.reserve(ms.d.size());
  for (const auto& d : ms.d) ms.d_crop.push_back(crop_centered(d, mt1, mt2));
}

void save_measurements(const std::filesystem::path& dir, const MeasurementSet& ms) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> names;

  {
    std::ofstream meta(dir / "meta.txt");
    if (!meta) throw std::runtime_error("cannot write " + (dir / "meta.txt").string());
    meta << "ptycho-measurements v1\n";
    meta << "count " << ms.d.size() << "\n";
    meta << "window " << ms.window_rows << " " << ms.window_cols << "\n";
    meta << "mt " << ms.mt1 << " " << ms.mt2 << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", ms.noise_scale);
    meta << "noise_scale " << buf << "\n";
    meta << "noise_seed " << ms.noise_seed << "\n";
  }
  names.emplace_back("meta.txt");

  for (std::size_t j = 0; j < ms.d.size(); ++j) {
    const std::string name = index_name("d", j);
    write_real(dir / name, ms.d[j]);
    names.push_back(name);
  }
  for (std::size_t j = 0; j < ms.d_crop.size(); ++j) {
    const std::string name = index_name("dcrop", j);
    write_real(dir / name, ms.d_crop[j]);
    names.push_back(name);
  }

  std::ofstream manifest(dir / "manifest.txt");
  if (!manifest) throw std::runtime_error("cannot write " + (dir / "manifest.txt").string());
  for (const auto& name : names)
    manifest << fnv1a_hex(fnv1a_file(dir / name)) << "  " << name << "\n";
}

MeasurementSet load_measurements(const std::filesystem::path& dir) {
  {
    std::ifstream manifest(dir / "manifest.txt");
    if (!manifest) throw std::runtime_error("missing manifest in " + dir.string());
    std::string hash, name;
    while (manifest >> hash >> name) {
      if (fnv1a_hex(fnv1a_file(dir / name)) != hash)
        throw std::runtime_error("manifest hash mismatch for " + (dir / name).string());
    }
  }

  std::ifstream meta(dir / "meta.txt");
  if (!meta) throw std::runtime_error("missing meta.txt in " + dir.string());
  std::string line;
  if (!std::getline(meta, line) || line != "ptycho-measurements v1")
    throw std::runtime_error(dir.string() + " is not a measurement directory");

  MeasurementSet ms;
  std::size_t count = 0;
  std::string key;
  meta >> key >> count;
  meta >> key >> ms.window_rows >> ms.window_cols;
  meta >> key >> ms.mt1 >> ms.mt2;
  meta >> key >> ms.noise_scale;
  meta >> key >> ms.noise_seed;
  if (!meta) throw std::runtime_error("malformed meta.txt in " + dir.string());

  ms.d.reserve(count);
  for (std::size_t j = 0; j < count; ++j) ms.d.push_back(read_real(dir / index_name("d", j)));
  if (ms.mt1 > 0) {
    ms.d_crop.reserve(count);
    for (std::size_t j = 0; j < count; ++j)
      ms.d_crop.push_back(read_real(dir / index_name("dcrop", j)));
  }
  for (const auto& d : ms.d)
    if (d.rows() != ms.window_rows || d.cols() != ms.window_cols)
      throw std::runtime_error("measurement shape mismatch in " + dir.string());
  return ms;
}

}  // namespace ptycho
