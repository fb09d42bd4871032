#include "ptycho/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ptycho/fft.hpp"
#include "ptycho/metrics.hpp"

namespace ptycho {
namespace {

constexpr double kPi = 3.14159265358979323846;

double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

cdouble phase_unit(cdouble v) {
  const double a = std::abs(v);
  return a > 0.0 ? v / a : cdouble(1.0, 0.0);
}

void require_shape(const ComplexField& f, std::size_t r, std::size_t c, const char* what) {
  if (f.rows() != r || f.cols() != c)
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

ComplexField project_modulus(const ComplexField& exit, const RealField& d) {
  if (exit.rows() != d.rows() || exit.cols() != d.cols())
    throw std::invalid_argument("project_modulus: shape mismatch");
  ComplexField spec = fast_fft2(exit);
  for (std::size_t i = 0; i < spec.rows() * spec.cols(); ++i)
    spec[i] = d[i] * phase_unit(spec[i]);
  return fast_ifft2(spec);
}

void pie_object_update(ComplexField& zj, const ComplexField& probe,
                       const ComplexField& projected, double beta) {
  require_shape(probe, zj.rows(), zj.cols(), "pie_object_update");
  require_shape(projected, zj.rows(), zj.cols(), "pie_object_update");
  for (std::size_t i = 0; i < zj.rows() * zj.cols(); ++i)
    zj[i] -= beta * std::conj(probe[i]) * (probe[i] * zj[i] - projected[i]);
}

void epie_probe_update(ComplexField& probe, const ComplexField& zj,
                       const ComplexField& projected, double gamma, bool blind) {
  if (!blind) throw std::logic_error("epie_probe_update: probe updates need blind mode");
  require_shape(zj, probe.rows(), probe.cols(), "epie_probe_update");
  require_shape(projected, probe.rows(), probe.cols(), "epie_probe_update");
  for (std::size_t i = 0; i < probe.rows() * probe.cols(); ++i)
    probe[i] -= gamma * std::conj(zj[i]) * (probe[i] * zj[i] - projected[i]);
}

ComplexField band_residual(const pft::PftPlan2D& plan, const ComplexField& exit,
                           const RealField& d_crop) {
  ComplexField band = pft::pft_apply_2d(plan, exit);
  if (band.rows() != d_crop.rows() || band.cols() != d_crop.cols())
    throw std::invalid_argument("band_residual: cropped measurement shape mismatch");
  for (std::size_t i = 0; i < band.rows() * band.cols(); ++i)
    band[i] -= d_crop[i] * phase_unit(band[i]);
  return pft::pft_adjoint_2d(plan, band);
}

RealField tv_gradient(const RealField& x) {
  const double delta = 1e-6;
  const std::size_t rows = x.rows(), cols = x.cols();
  const auto psi_prime = [delta](double t) { return t / std::sqrt(t * t + delta * delta); };
  RealField g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = 0.0;
      if (i + 1 < rows) acc -= psi_prime(x(i + 1, j) - x(i, j));
      if (i > 0) acc += psi_prime(x(i, j) - x(i - 1, j));
      if (j + 1 < cols) acc -= psi_prime(x(i, j + 1) - x(i, j));
      if (j > 0) acc += psi_prime(x(i, j) - x(i, j - 1));
      g(i, j) = acc;
    }
  }
  return g;
}

double objective_value(const ComplexField& frame, const ComplexField& probe,
                       const ScanPattern& sp, const MeasurementSet& ms) {
  if (ms.count() != sp.count())
    throw std::invalid_argument("objective_value: measurement/pattern count mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < sp.count(); ++j) {
    ComplexField exit = window_slice(frame, sp, j);
    for (std::size_t i = 0; i < exit.rows() * exit.cols(); ++i) exit[i] *= probe[i];
    const ComplexField proj = project_modulus(exit, ms.d[j]);
    for (std::size_t i = 0; i < exit.rows() * exit.cols(); ++i)
      acc += std::norm(exit[i] - proj[i]);
  }
  return acc / static_cast<double>(sp.count());
}

bool relative_change_below(const ComplexField& prev, const ComplexField& cur, double tol) {
  const double pn = prev.norm_fro();
  if (pn == 0.0) {
    std::fprintf(stderr, "relative_change_below: zero reference norm, not stopping\n");
    return false;
  }
  double num = 0.0;
  for (std::size_t i = 0; i < prev.rows() * prev.cols(); ++i) num += std::norm(cur[i] - prev[i]);
  return std::sqrt(num) / pn <= tol;
}

ComplexField random_object(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ComplexField z(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    const double mag = u01(rng);
    const double ph = u01(rng) * (kPi / 2);
    z[i] = std::polar(mag, ph);
  }
  return z;
}

ComplexField support_probe(const ScanPattern& sp) {
  ComplexField probe(sp.window_rows, sp.window_cols);
  for (std::size_t i = 0; i < sp.window_rows * sp.window_cols; ++i)
    probe[i] = cdouble(sp.mask[i], 0.0);
  return probe;
}

namespace {

struct TruthViews {
  ComplexField object;
  RealField mag, ph;
  double mag_range = 1.0, ph_range = 1.0;
};

void fill_metrics(TraceRow& row, const ComplexField& frame, const ScanPattern& sp,
                  const TruthViews* truth) {
  if (!truth) {
    row.rel_err = row.rel_err_mag = row.rel_err_phase = quiet_nan();
    row.ssim_mag = row.ssim_phase = row.psnr_mag = row.psnr_phase = quiet_nan();
    row.rel_err_aligned = quiet_nan();
    return;
  }
  const ComplexField obj = extract_object(frame, sp);
  const RealField mag = magnitude(obj);
  const RealField ph = phase(obj);
  row.rel_err = relative_error(obj, truth->object);
  row.rel_err_aligned = relative_error_aligned(obj, truth->object);
  row.rel_err_mag = relative_error(mag, truth->mag);
  row.rel_err_phase = relative_error(ph, truth->ph);
  row.ssim_mag = ssim(mag, truth->mag, truth->mag_range);
  row.ssim_phase = ssim(ph, truth->ph, truth->ph_range);
  row.psnr_mag = psnr(mag, truth->mag, truth->mag_range);
  row.psnr_phase = psnr(ph, truth->ph, truth->ph_range);
}

// Fisher-Yates with explicit modulo draws so the permutation stream does not
// depend on library internals.
void shuffle_order(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

ReconResult hybrid_solve(const MeasurementSet& ms, const ScanPattern& sp,
                         const ComplexField& probe_init, const ComplexField& object_init,
                         const SolverConfig& cfg, const minimax::ScopeTable* table,
                         const ComplexField* truth_frame) {
  if (ms.count() != sp.count())
    throw std::invalid_argument("hybrid_solve: measurement/pattern count mismatch");
  if (ms.window_rows != sp.window_rows || ms.window_cols != sp.window_cols)
    throw std::invalid_argument("hybrid_solve: measurement window mismatch");
  require_shape(probe_init, sp.window_rows, sp.window_cols, "hybrid_solve probe");
  require_shape(object_init, sp.frame_rows, sp.frame_cols, "hybrid_solve object");
  if (cfg.pft_sweeps < 0 || cfg.fft_sweeps < 0)
    throw std::invalid_argument("hybrid_solve: negative sweep budget");

  ReconResult res;
  res.frame = object_init;
  res.probe = probe_init;

  // Band plan and cropped data only exist when the warm-start stage runs.
  pft::PftPlan2D plan;
  const std::vector<RealField>* dcrop = nullptr;
  std::vector<RealField> dcrop_local;
  if (cfg.pft_sweeps > 0) {
    std::size_t mt1 = cfg.mt1 ? cfg.mt1 : sp.window_rows / 8;
    std::size_t mt2 = cfg.mt2 ? cfg.mt2 : sp.window_cols / 8;
    std::size_t p1 = cfg.p1 ? cfg.p1 : mt1;
    std::size_t p2 = cfg.p2 ? cfg.p2 : mt2;
    if (!table) throw std::invalid_argument("hybrid_solve: band stage needs a scope table");
    plan = pft::pft_plan_2d(sp.window_rows, sp.window_cols, mt1, mt2, p1, p2, cfg.eps_pft,
                            *table);
    if (!ms.d_crop.empty() && ms.mt1 == mt1 && ms.mt2 == mt2) {
      dcrop = &ms.d_crop;
    } else {
      dcrop_local.reserve(ms.d.size());
      for (const auto& d : ms.d) dcrop_local.push_back(crop_centered(d, mt1, mt2));
      dcrop = &dcrop_local;
    }
  }

  TruthViews truth;
  const TruthViews* truth_ptr = nullptr;
  if (truth_frame) {
    require_shape(*truth_frame, sp.frame_rows, sp.frame_cols, "hybrid_solve truth");
    truth.object = extract_object(*truth_frame, sp);
    truth.mag = magnitude(truth.object);
    truth.ph = phase(truth.object);
    truth.mag_range = dynamic_range(truth.mag);
    truth.ph_range = dynamic_range(truth.ph);
    truth_ptr = &truth;
  }

  std::mt19937_64 shuffle_rng(cfg.seed);
  std::vector<std::size_t> order(sp.count());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const double probe_guard = 1e6 * std::max(probe_init.norm_fro(), 1e-300);
  const double frame_guard = 1e6 * std::max(object_init.norm_fro(), 1e-300);
  const auto t0 = std::chrono::steady_clock::now();
  const int total_sweeps = cfg.pft_sweeps + cfg.fft_sweeps;

  for (int sweep = 1; sweep <= total_sweeps; ++sweep) {
    const bool band_stage = sweep <= cfg.pft_sweeps;
    const ComplexField prev = res.frame;

    if (cfg.order == VisitOrder::shuffled) shuffle_order(order, shuffle_rng);
    for (const std::size_t j : order) {
      ComplexField zj = window_slice(res.frame, sp, j);
      ComplexField exit(zj.rows(), zj.cols());
      for (std::size_t i = 0; i < zj.rows() * zj.cols(); ++i) exit[i] = res.probe[i] * zj[i];

      if (band_stage) {
        const ComplexField resid = band_residual(plan, exit, (*dcrop)[j]);
        for (std::size_t i = 0; i < zj.rows() * zj.cols(); ++i)
          zj[i] -= cfg.beta_pft * std::conj(res.probe[i]) * resid[i];
        if (cfg.blind) {
          for (std::size_t i = 0; i < zj.rows() * zj.cols(); ++i) exit[i] = res.probe[i] * zj[i];
          const ComplexField resid2 = band_residual(plan, exit, (*dcrop)[j]);
          for (std::size_t i = 0; i < zj.rows() * zj.cols(); ++i)
            res.probe[i] -= cfg.gamma_pft * std::conj(zj[i]) * resid2[i];
        }
      } else {
        const ComplexField proj = project_modulus(exit, ms.d[j]);
        pie_object_update(zj, res.probe, proj, cfg.beta);
        if (cfg.blind) {
          for (std::size_t i = 0; i < zj.rows() * zj.cols(); ++i) exit[i] = res.probe[i] * zj[i];
          const ComplexField proj2 = project_modulus(exit, ms.d[j]);
          epie_probe_update(res.probe, zj, proj2, cfg.gamma, cfg.blind);
        }
      }
      set_window(res.frame, sp, j, zj);
    }

    if (cfg.tv_lambda_mag > 0.0 || cfg.tv_lambda_phase > 0.0) {
      const double step_scale = band_stage ? cfg.beta_pft : cfg.beta;
      RealField mag = magnitude(res.frame);
      RealField ph = phase(res.frame);
      if (cfg.tv_lambda_mag > 0.0) {
        const RealField g = tv_gradient(mag);
        for (std::size_t i = 0; i < mag.rows() * mag.cols(); ++i)
          mag[i] -= cfg.tv_lambda_mag * step_scale * g[i];
      }
      if (cfg.tv_lambda_phase > 0.0) {
        const RealField g = tv_gradient(ph);
        for (std::size_t i = 0; i < ph.rows() * ph.cols(); ++i)
          ph[i] -= cfg.tv_lambda_phase * step_scale * g[i];
      }
      res.frame = from_polar(mag, ph);
    }

    res.sweeps_run = sweep;

    TraceRow row;
    row.iteration = static_cast<std::size_t>(sweep);
    row.stage = band_stage ? "pft" : "fft";
    row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.objective = objective_value(res.frame, res.probe, sp, ms);
    fill_metrics(row, res.frame, sp, truth_ptr);
    res.trace.append(std::move(row));

    if (!res.frame.all_finite() || !res.probe.all_finite() ||
        res.frame.norm_fro() > frame_guard || res.probe.norm_fro() > probe_guard) {
      res.diverged = true;
      break;
    }
    if (cfg.tol > 0.0 && relative_change_below(prev, res.frame, cfg.tol)) {
      res.stopped_early = true;
      break;
    }
  }
  return res;
}

ReconResult solve_pie(const MeasurementSet& ms, const ScanPattern& sp,
                      const ComplexField& probe, const ComplexField& object_init,
                      const SolverConfig& cfg, const ComplexField* truth_frame) {
  SolverConfig c = cfg;
  c.pft_sweeps = 0;
  c.blind = false;
  return hybrid_solve(ms, sp, probe, object_init, c, nullptr, truth_frame);
}

ReconResult solve_epie(const MeasurementSet& ms, const ScanPattern& sp,
                       const ComplexField& probe_init, const ComplexField& object_init,
                       const SolverConfig& cfg, const ComplexField* truth_frame) {
  SolverConfig c = cfg;
  c.pft_sweeps = 0;
  c.blind = true;
  return hybrid_solve(ms, sp, probe_init, object_init, c, nullptr, truth_frame);
}

}  // namespace ptycho
