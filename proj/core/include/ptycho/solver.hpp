#pragma once

#include <cstdint>

#include "ptycho/field.hpp"
#include "ptycho/minimax.hpp"
#include "ptycho/pft.hpp"
#include "ptycho/scan.hpp"
#include "ptycho/simulate.hpp"
#include "ptycho/trace.hpp"

namespace ptycho {

enum class VisitOrder { sequential, shuffled };

// Two-stage sweep budget: pft_sweeps warm-start sweeps against the cropped
// low-frequency band, then fft_sweeps with the full modulus projection.
// Band steps are small by design: one band update changes a pixel by
// beta_pft * |probe|^2 * (adjoint gain ~ window size), so stability wants
// beta_pft * window_pixels < 2. The modulus stage wants beta * max|probe|^2 < 2.
struct SolverConfig {
  int pft_sweeps = 0;
  int fft_sweeps = 50;
  double beta = 1.0;
  double gamma = 1.0;
  double beta_pft = 1e-3;
  double gamma_pft = 1e-3;
  double eps_pft = 1e-3;
  std::size_t mt1 = 0, mt2 = 0;  // band half-sizes; 0 -> window/8
  std::size_t p1 = 0, p2 = 0;    // transform splits; 0 -> mt (scope 1)
  double tol = 0.0;              // per-sweep relative-change stop; 0 disables
  double tv_lambda_mag = 0.0;    // smoothing once per sweep, step lambda * beta
  double tv_lambda_phase = 0.0;
  bool blind = false;            // update the probe too
  VisitOrder order = VisitOrder::sequential;
  std::uint64_t seed = 0;        // shuffle stream
};

struct ReconResult {
  ComplexField frame;  // frame-shaped object estimate
  ComplexField probe;
  MetricTrace trace;   // one row per completed sweep
  int sweeps_run = 0;
  bool stopped_early = false;
  bool diverged = false;
};

// ---- building blocks (unit-tested individually) ----

// F^-1 [ d .* exp(i arg(F v)) ]; bins with zero spectrum keep phase factor 1.
ComplexField project_modulus(const ComplexField& exit, const RealField& d);

// z_j <- z_j - beta * conj(probe) .* (probe .* z_j - projected)
void pie_object_update(ComplexField& zj, const ComplexField& probe,
                       const ComplexField& projected, double beta);

// probe <- probe - gamma * conj(zj) .* (probe .* zj - projected); the caller
// passes the already-updated object patch. Throws logic_error unless blind.
void epie_probe_update(ComplexField& probe, const ComplexField& zj,
                       const ComplexField& projected, double gamma, bool blind);

// A* (A v - d_crop .* exp(i arg(A v))) for the banded transform A.
ComplexField band_residual(const pft::PftPlan2D& plan, const ComplexField& exit,
                           const RealField& d_crop);

// Gradient of sum sqrt((forward differences)^2 + delta^2), delta = 1e-6.
RealField tv_gradient(const RealField& x);

// Phi = (1/N) sum_j || probe .* z_j - P_j(probe .* z_j) ||_F^2
double objective_value(const ComplexField& frame, const ComplexField& probe,
                       const ScanPattern& sp, const MeasurementSet& ms);

// ||cur - prev||_F / ||prev||_F <= tol; warns and returns false on zero prev.
bool relative_change_below(const ComplexField& prev, const ComplexField& cur, double tol);

// Deterministic initializers: magnitude U[0,1], phase U[0,pi/2] per pixel
// (row-major order, one mt19937_64 stream); probe = mask support indicator.
ComplexField random_object(std::size_t rows, std::size_t cols, std::uint64_t seed);
ComplexField support_probe(const ScanPattern& sp);

// ---- drivers ----

// The one sweep engine behind all three entry points. `table` is required
// when cfg.pft_sweeps > 0 (the band plan is built from it unless the
// measurement set already carries matching crops). `truth_frame`, when given,
// fills the metric columns of the trace (object region only).
ReconResult hybrid_solve(const MeasurementSet& ms, const ScanPattern& sp,
                         const ComplexField& probe_init, const ComplexField& object_init,
                         const SolverConfig& cfg, const minimax::ScopeTable* table = nullptr,
                         const ComplexField* truth_frame = nullptr);

// Modulus-only runs: the same engine with pft_sweeps forced to 0.
ReconResult solve_pie(const MeasurementSet& ms, const ScanPattern& sp,
                      const ComplexField& probe, const ComplexField& object_init,
                      const SolverConfig& cfg, const ComplexField* truth_frame = nullptr);
ReconResult solve_epie(const MeasurementSet& ms, const ScanPattern& sp,
                       const ComplexField& probe_init, const ComplexField& object_init,
                       const SolverConfig& cfg, const ComplexField* truth_frame = nullptr);

}  // namespace ptycho
