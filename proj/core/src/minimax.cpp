#include "ptycho/minimax.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ptycho::minimax {
namespace {

constexpr double kPi = std::numbers::pi;

// ---- single-parity weighted Remez on [0,1] --------------------------------
//
// Both parity parts reduce, after v = (x/xi)^2, to: approximate g(v) on [0,1]
// with a degree-d polynomial in v, minimizing max |wgt(v) * (g(v) - P(v))|.
//   even part: g(v) = cos(pi*xi*sqrt(v)),           wgt = 1
//   odd  part: g(v) = sin(pi*xi*sqrt(v))/sqrt(v),   wgt = sqrt(v)
// The weight is positive on (0,1], so {wgt * T*_k} stays a Chebyshev system
// there and the classical exchange applies; the odd-part error vanishes at
// v = 0, keeping its extrema interior.

double cheb_t(int k, double s) {  // T_k on [-1,1], s = 2v-1
  if (k == 0) return 1.0;
  double tm = 1.0, t = s;
  for (int i = 1; i < k; ++i) {
    const double tn = 2.0 * s * t - tm;
    tm = t;
    t = tn;
  }
  return t;
}

struct ParityProblem {
  double xi = 0.0;
  bool odd = false;
  int degree = 0;  // degree in v

  double target(double v) const {
    const double u = std::sqrt(v);
    const double t = kPi * xi * u;
    if (!odd) return std::cos(t);
    // sin(pi*xi*u)/u with a series guard at the removable singularity
    if (t < 1e-4) {
      const double t2 = t * t;
      return kPi * xi * (1.0 - t2 / 6.0 * (1.0 - t2 / 20.0));
    }
    return std::sin(t) / u;
  }
  double weight(double v) const { return odd ? std::sqrt(v) : 1.0; }

  double poly(const Eigen::VectorXd& c, double v) const {
    const double s = 2.0 * v - 1.0;
    double acc = 0.0;
    for (int k = 0; k <= degree; ++k) acc += c[k] * cheb_t(k, s);
    return acc;
  }
  double error(const Eigen::VectorXd& c, double v) const {
    return weight(v) * (target(v) - poly(c, v));
  }
};

struct ParityResult {
  Eigen::VectorXd cheb_coeff;  // in T*_k(v)
  int alternations = 0;
  bool converged = false;
};

std::vector<double> initial_reference(const ParityProblem& pb) {
  const int d = pb.degree;
  std::vector<double> ref;
  if (!pb.odd) {
    // extrema of T*_{d+1} on [0,1]
    for (int i = d + 1; i >= 0; --i)
      ref.push_back(0.5 * (1.0 - std::cos(kPi * i / (d + 1))));
  } else {
    // positive-u extrema of T_{2d+3}; squared into v, ascending, avoiding 0
    for (int i = d + 1; i >= 0; --i) {
      const double u = std::cos(kPi * i / (2 * d + 3));
      ref.push_back(u * u);
    }
    std::sort(ref.begin(), ref.end());
  }
  return ref;
}

// Solve for leveled coefficients: P(v_i) + (-1)^i * lambda / wgt(v_i) = g(v_i)
bool solve_reference(const ParityProblem& pb, const std::vector<double>& ref,
                     Eigen::VectorXd& coeff, double& lambda) {
  const int d = pb.degree;
  const int m = d + 2;
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd b(m);
  double sign = 1.0;
  for (int i = 0; i < m; ++i) {
    const double v = ref[i];
    const double s = 2.0 * v - 1.0;
    for (int k = 0; k <= d; ++k) A(i, k) = cheb_t(k, s);
    A(i, d + 1) = sign / pb.weight(v);
    b[i] = pb.target(v);
    sign = -sign;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) return false;
  Eigen::VectorXd sol = lu.solve(b);
  coeff = sol.head(d + 1);
  lambda = sol[d + 1];
  return true;
}

// Dense scan clustered like Chebyshev points so endpoint extrema are resolved.
std::vector<double> scan_grid(const ParityProblem& pb, int npts) {
  std::vector<double> g;
  g.reserve(npts);
  if (!pb.odd) {
    for (int i = 0; i < npts; ++i)
      g.push_back(0.5 * (1.0 - std::cos(kPi * i / (npts - 1))));
  } else {
    for (int i = npts - 1; i >= 0; --i) {
      const double u = std::cos(0.5 * kPi * i / (npts - 1));  // u in [0,1]
      g.push_back(u * u);
    }
  }
  return g;
}

// Alternating extrema of the current error: between consecutive sign changes
// take the grid argmax of |e|, then refine each by golden-section.
std::vector<double> find_extrema(const ParityProblem& pb, const Eigen::VectorXd& c,
                                 const std::vector<double>& grid) {
  std::vector<double> pts;
  std::vector<double> vals;
  double best_v = grid[0];
  double best_e = pb.error(c, grid[0]);
  auto flush = [&]() {
    pts.push_back(best_v);
    vals.push_back(best_e);
  };
  double prev_e = best_e;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double e = pb.error(c, grid[i]);
    if ((e >= 0) != (prev_e >= 0)) {  // sign change: close the segment
      flush();
      best_v = grid[i];
      best_e = e;
    } else if (std::abs(e) > std::abs(best_e)) {
      best_v = grid[i];
      best_e = e;
    }
    prev_e = e;
  }
  flush();

  // golden-section polish inside each bracketing grid cell
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (auto& v : pts) {
    auto it = std::lower_bound(grid.begin(), grid.end(), v);
    const std::size_t idx = static_cast<std::size_t>(it - grid.begin());
    double lo = idx > 0 ? grid[idx - 1] : grid.front();
    double hi = idx + 1 < grid.size() ? grid[idx + 1] : grid.back();
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = std::abs(pb.error(c, x1)), f2 = std::abs(pb.error(c, x2));
    for (int iter = 0; iter < 40 && (hi - lo) > 1e-15; ++iter) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = std::abs(pb.error(c, x2));
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = std::abs(pb.error(c, x1));
      }
    }
    v = 0.5 * (lo + hi);
  }
  return pts;
}

ParityResult remez(const ParityProblem& pb) {
  ParityResult res;
  std::vector<double> ref = initial_reference(pb);
  const std::vector<double> grid = scan_grid(pb, 4096);
  Eigen::VectorXd c;
  double lambda = 0.0;
  const int m = pb.degree + 2;
  // the error is a difference of O(max(1, pi*xi)) quantities, so its extrema
  // can only equalize down to this absolute rounding floor
  const double noise_floor = 1e-14 * (1.0 + kPi * pb.xi);

  for (int iter = 0; iter < 60; ++iter) {
    if (!solve_reference(pb, ref, c, lambda)) return res;
    // over-resolved regime: the whole error curve sits in rounding noise, so
    // extremum exchange would only chase noise; the current (Chebyshev-seeded)
    // reference solution is already as good as doubles allow
    double gmax = 0.0;
    for (double v : grid) gmax = std::max(gmax, std::abs(pb.error(c, v)));
    if (gmax <= 10.0 * noise_floor) {
      res.cheb_coeff = c;
      res.alternations = m;
      res.converged = true;
      return res;
    }
    std::vector<double> ext = find_extrema(pb, c, grid);
    // trim from the small-|e| end until the alternation set fits
    while (static_cast<int>(ext.size()) > m) {
      if (std::abs(pb.error(c, ext.front())) <= std::abs(pb.error(c, ext.back())))
        ext.erase(ext.begin());
      else
        ext.pop_back();
    }
    if (static_cast<int>(ext.size()) < m) return res;  // exchange stalled

    double emax = 0.0, emin = std::numeric_limits<double>::max();
    for (double v : ext) {
      const double a = std::abs(pb.error(c, v));
      emax = std::max(emax, a);
      emin = std::min(emin, a);
    }
    ref = ext;
    if ((emax - emin) <= 1e-10 * emax + noise_floor) {
      if (!solve_reference(pb, ref, c, lambda)) return res;
      res.cheb_coeff = c;
      res.alternations = m;
      res.converged = true;
      return res;
    }
  }
  return res;
}

// Fallback: Chebyshev interpolation of the target at d+1 nodes of [0,1].
Eigen::VectorXd cheb_interp(const ParityProblem& pb) {
  const int d = pb.degree;
  const int n = d + 1;
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const double s = std::cos(kPi * (i + 0.5) / n);
    const double v = 0.5 * (s + 1.0);
    for (int k = 0; k <= d; ++k) A(i, k) = cheb_t(k, s);
    b[i] = pb.target(v);
  }
  return A.fullPivLu().solve(b);
}

// Monomial coefficients (in u on [-1,1]) of T_k(u), k = 0..kmax.
std::vector<std::vector<double>> cheb_monomial_table(int kmax) {
  std::vector<std::vector<double>> t(kmax + 1);
  t[0] = {1.0};
  if (kmax >= 1) t[1] = {0.0, 1.0};
  for (int k = 2; k <= kmax; ++k) {
    t[k].assign(k + 1, 0.0);
    for (int j = 0; j <= k - 1; ++j) t[k][j + 1] += 2.0 * t[k - 1][j];
    for (int j = 0; j <= k - 2; ++j) t[k][j] -= t[k - 2][j];
  }
  return t;
}

}  // namespace

cdouble ApproxPoly::eval(double x) const {
  cdouble acc{0.0, 0.0};
  for (int j = r - 1; j >= 0; --j) acc = acc * x + coeff[j];
  return acc;
}

ApproxPoly best_approx(int r, double xi) {
  if (r < 1 || r > 64) throw std::invalid_argument("best_approx: r out of range");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw std::invalid_argument("best_approx: xi must be positive");

  const int even_deg = (r - 1) / 2;           // degree in v; powers u^{2k}
  const int odd_deg = r >= 2 ? (r - 2) / 2 : -1;  // powers u^{2k+1}

  ApproxPoly out;
  out.r = r;
  out.xi = xi;
  out.exchange_converged = true;

  ParityProblem even{xi, false, even_deg};
  ParityResult even_res = remez(even);
  Eigen::VectorXd even_c;
  if (even_res.converged) {
    even_c = even_res.cheb_coeff;
    out.alternations += even_res.alternations;
  } else {
    even_c = cheb_interp(even);
    out.exchange_converged = false;
  }

  Eigen::VectorXd odd_c;
  if (odd_deg >= 0) {
    ParityProblem odd{xi, true, odd_deg};
    ParityResult odd_res = remez(odd);
    if (odd_res.converged) {
      odd_c = odd_res.cheb_coeff;
      out.alternations += odd_res.alternations;
    } else {
      odd_c = cheb_interp(odd);
      out.exchange_converged = false;
    }
  }

  // Assemble monomial coefficients in u: T*_k(v) with v = u^2 is T_{2k}(u),
  // and the odd part carries one extra factor of u.
  const int umax = std::max(2 * even_deg, odd_deg >= 0 ? 2 * odd_deg + 1 : 0);
  const auto cheb_mono = cheb_monomial_table(std::max(umax, 1));
  std::vector<double> mono_u(static_cast<std::size_t>(r), 0.0);
  for (int k = 0; k <= even_deg; ++k)
    for (int j = 0; j <= 2 * k; ++j)
      if (cheb_mono[2 * k][j] != 0.0) mono_u[j] += even_c[k] * cheb_mono[2 * k][j];
  for (int k = 0; k <= odd_deg; ++k)
    for (int j = 0; j <= 2 * k; ++j)
      if (cheb_mono[2 * k][j] != 0.0) mono_u[j + 1] += odd_c[k] * cheb_mono[2 * k][j];

  out.coeff.resize(static_cast<std::size_t>(r));
  double scale = 1.0;  // xi^-j
  for (int j = 0; j < r; ++j) {
    const double c = mono_u[j] * scale;
    out.coeff[j] = (j % 2 == 0) ? cdouble{c, 0.0} : cdouble{0.0, c};
    scale /= xi;
  }

  // a-posteriori certification on a uniform grid over [-xi, xi]
  constexpr int kGrid = 4096;
  double err = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = -xi + 2.0 * xi * i / kGrid;
    const cdouble f{std::cos(kPi * x), std::sin(kPi * x)};
    err = std::max(err, std::abs(out.eval(x) - f));
  }
  out.achieved_error = err;
  return out;
}

double scope(double eps, int r) {
  if (!(eps > 0.0)) throw std::invalid_argument("scope: eps must be positive");
  auto feasible = [&](double xi) { return best_approx(r, xi).achieved_error <= eps; };

  double lo = 0.25;
  while (!feasible(lo)) {
    lo *= 0.5;
    if (lo < 1e-12) return 0.0;
  }
  double hi = lo * 2.0;
  constexpr double kCap = 64.0;
  while (hi < kCap && feasible(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= kCap && feasible(kCap)) return kCap;
  while ((hi - lo) > 1e-3 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;  // feasible endpoint
}

int min_degree(double eps, double target_scope, int max_r) {
  double best = 0.0;
  for (int r = 1; r <= max_r; ++r) {
    const double s = scope(eps, r);
    best = std::max(best, s);
    if (s >= target_scope) return r;
  }
  std::ostringstream msg;
  msg << "min_degree: target scope " << target_scope << " infeasible for eps " << eps
      << " up to r=" << max_r << " (best achievable " << best
      << "); reduce the band/segment ratio or relax eps";
  throw std::invalid_argument(msg.str());
}

std::vector<double> ScopeTable::default_eps() {
  return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
}

ScopeTable ScopeTable::compute(const std::vector<double>& eps_list, int max_r) {
  if (eps_list.empty() || max_r < 1) throw std::invalid_argument("ScopeTable: empty spec");
  ScopeTable t;
  t.eps_list_ = eps_list;
  t.max_r_ = max_r;
  for (double eps : eps_list) {
    double warm = 0.0;  // scope is nondecreasing in r: reuse as bracket floor
    for (int r = 1; r <= max_r; ++r) {
      auto feasible = [&](double xi) { return best_approx(r, xi).achieved_error <= eps; };
      double lo = warm > 0.0 && feasible(warm) ? warm : 0.0;
      if (lo == 0.0) {
        lo = 0.25;
        while (!feasible(lo) && lo >= 1e-12) lo *= 0.5;
      }
      ScopeRecord rec;
      rec.eps = eps;
      rec.r = r;
      if (lo < 1e-12) {
        rec.xi = 0.0;
        rec.achieved_error = 0.0;
        rec.coeff.assign(static_cast<std::size_t>(r), cdouble{0.0, 0.0});
      } else {
        double hi = std::max(lo * 2.0, lo + 0.05);
        constexpr double kCap = 64.0;
        while (hi < kCap && feasible(hi)) {
          lo = hi;
          hi *= 2.0;
        }
        while ((hi - lo) > 1e-3 * lo) {
          const double mid = 0.5 * (lo + hi);
          if (feasible(mid))
            lo = mid;
          else
            hi = mid;
        }
        ApproxPoly poly = best_approx(r, lo);
        rec.xi = lo;
        rec.achieved_error = poly.achieved_error;
        rec.coeff = poly.coeff;
      }
      warm = rec.xi;
      t.records_.push_back(std::move(rec));
    }
  }
  return t;
}

const ScopeRecord* ScopeTable::find(double eps, int r) const {
  for (const auto& rec : records_)
    if (rec.r == r && std::abs(rec.eps - eps) <= 1e-9 * eps) return &rec;
  return nullptr;
}

bool ScopeTable::has(double eps, int r) const { return find(eps, r) != nullptr; }

double ScopeTable::scope(double eps, int r) const { return record(eps, r).xi; }

const ScopeRecord& ScopeTable::record(double eps, int r) const {
  const ScopeRecord* rec = find(eps, r);
  if (!rec) {
    std::ostringstream msg;
    msg << "ScopeTable: no record for eps=" << eps << " r=" << r;
    throw std::invalid_argument(msg.str());
  }
  return *rec;
}

int ScopeTable::min_degree(double eps, double target_scope) const {
  double best = 0.0;
  for (int r = 1; r <= max_r_; ++r) {
    const ScopeRecord* rec = find(eps, r);
    if (!rec) continue;
    best = std::max(best, rec->xi);
    if (rec->xi >= target_scope) return r;
  }
  std::ostringstream msg;
  msg << "min_degree: target scope " << target_scope << " infeasible for eps " << eps
      << " up to r=" << max_r_ << " (best achievable " << best
      << "); reduce the band/segment ratio or relax eps";
  throw std::invalid_argument(msg.str());
}

void ScopeTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("ScopeTable: cannot open " + path.string());
  os << "pft-scope-table v1\n";
  os << "# record <eps> <r> <xi> <achieved_error> <w0.re> <w0.im> ... (r pairs)\n";
  char buf[64];
  for (const auto& rec : records_) {
    os << "record ";
    std::snprintf(buf, sizeof buf, "%.6e", rec.eps);
    os << buf << ' ' << rec.r << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", rec.xi);
    os << buf << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", rec.achieved_error);
    os << buf;
    for (const auto& c : rec.coeff) {
      std::snprintf(buf, sizeof buf, " %.17g", c.real());
      os << buf;
      std::snprintf(buf, sizeof buf, " %.17g", c.imag());
      os << buf;
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("ScopeTable: write failed");
}

ScopeTable ScopeTable::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("ScopeTable: cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != "pft-scope-table v1")
    throw std::runtime_error("ScopeTable: bad header in " + path.string());
  ScopeTable t;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ScopeRecord rec;
    if (!(ls >> tag >> rec.eps >> rec.r >> rec.xi >> rec.achieved_error) || tag != "record")
      throw std::runtime_error("ScopeTable: malformed record line");
    rec.coeff.reserve(static_cast<std::size_t>(rec.r));
    for (int j = 0; j < rec.r; ++j) {
      double re, im;
      if (!(ls >> re >> im)) throw std::runtime_error("ScopeTable: truncated coefficients");
      rec.coeff.emplace_back(re, im);
    }
    if (std::find(t.eps_list_.begin(), t.eps_list_.end(), rec.eps) == t.eps_list_.end())
      t.eps_list_.push_back(rec.eps);
    t.max_r_ = std::max(t.max_r_, rec.r);
    t.records_.push_back(std::move(rec));
  }
  if (t.records_.empty()) throw std::runtime_error("ScopeTable: no records in " + path.string());
  return t;
}

}  // namespace ptycho::minimax
