#pragma once

#include <filesystem>
#include <vector>

#include "ptycho/field.hpp"

namespace ptycho::minimax {

// Near-minimax polynomial approximation of f(x) = e^{i*pi*x} on |x| <= xi:
//   P(x) = sum_{j<r} w_j x^j,   even-j coefficients real, odd-j imaginary.
// Built by a Remez exchange run separately on cos(pi x) (even powers) and
// sin(pi x) (odd powers); the symmetric interval makes that parity split the
// natural shape of the optimum. achieved_error is always measured a
// posteriori on a dense grid, so downstream error bounds use the measured
// value, never the theoretical one.
struct ApproxPoly {
  int r = 0;                   // coefficient count, degree <= r-1
  double xi = 0.0;             // certified half-interval
  double achieved_error = 0.0; // sup error on the certification grid
  std::vector<cdouble> coeff;  // w_0 .. w_{r-1}
  int alternations = 0;        // equioscillation witness: alternation count over both parity parts
  bool exchange_converged = true;  // false when the Chebyshev-interpolation fallback produced coeff

  cdouble eval(double x) const;
};

ApproxPoly best_approx(int r, double xi);

// Largest xi (bisection, relative tolerance 1e-3, feasible endpoint returned)
// such that the r-coefficient approximation stays within eps on |x| <= xi.
double scope(double eps, int r);

// One (eps, r) cell of the precomputed scope table.
struct ScopeRecord {
  double eps = 0.0;
  int r = 0;
  double xi = 0.0;
  double achieved_error = 0.0;
  std::vector<cdouble> coeff;
};

// Offline table over eps in {1e-1..1e-7} x r in 1..max_r. Computed once at
// build time, serialized as structured text, and only read at runtime.
class ScopeTable {
 public:
  static std::vector<double> default_eps();  // {1e-1, ..., 1e-7}
  static ScopeTable compute(const std::vector<double>& eps_list = default_eps(),
                            int max_r = 25);
  static ScopeTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  bool has(double eps, int r) const;
  double scope(double eps, int r) const;
  const ScopeRecord& record(double eps, int r) const;

  // Smallest r with scope(eps, r) >= target_scope; throws invalid_argument
  // (naming the best achievable scope) when no table row reaches the target.
  int min_degree(double eps, double target_scope) const;

  int max_r() const { return max_r_; }
  const std::vector<double>& eps_list() const { return eps_list_; }
  const std::vector<ScopeRecord>& records() const { return records_; }

 private:
  std::vector<double> eps_list_;
  int max_r_ = 0;
  std::vector<ScopeRecord> records_;  // eps-major, r ascending
  const ScopeRecord* find(double eps, int r) const;
};

// Expensive table-free variant (runs the bisection per r); mostly for tests.
int min_degree(double eps, double target_scope, int max_r = 25);

}  // namespace ptycho::minimax
