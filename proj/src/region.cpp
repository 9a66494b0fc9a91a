#include "ccifc/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

namespace ccifc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;

}  // namespace

const std::array<std::array<int, 2>, RegionPolytope::kFamilyCount>
    RegionPolytope::kFamilyWeights = {{{{1, 0}},
                                       {{0, 1}},
                                       {{1, 1}},
                                       {{2, 1}},
                                       {{1, 2}},
                                       {{2, 2}},
                                       {{2, 3}},
                                       {{3, 2}}}};

RegionPolytope corollary_region(const RateTerms& t) {
  const auto& I = t.I;
  RegionPolytope r;
  // The three encoding-rate lower bounds must be met by finite rate splits;
  // an infinite requirement empties the region outright.
  if (std::isinf(I[1]) || std::isinf(I[2]) || std::isinf(I[3])) {
    r.feasible = false;
    r.bound.fill(kInf);
    return r;
  }
  const double i1p = std::max(I[1] + I[2], I[3]);
  const auto le = [](double a, double b) {
    return a <= b + 1e-12 * std::max(1.0, std::abs(b));
  };
  r.feasible = le(I[1], I[16]) && le(I[2], I[17]);

  using std::min;
  r.bound[0] = min(min(I[21] + I[4] + I[16], I[5]) - I[1],
                   I[21] + min(I[4] + I[17] - I[2], I[9]));
  r.bound[1] = min(I[19], I[14] + min(I[10], I[13])) - i1p;
  r.bound[2] =
      min({I[14] + I[5],
           I[15] + min(I[7], I[8] - I[1]),
           I[21] + I[17] + min(I[10], I[4] + I[13]),
           I[4] + min(I[21] + I[18], I[20] + I[15]),
           I[21] + I[14] + min({I[12], I[4] + I[16], I[10] + I[17] - I[2]})}) -
      i1p;
  r.bound[3] = min({I[4] + I[15] + min(I[6], I[11] - I[1]),
                    I[21] + 2 * I[4] + I[17] + I[16],
                    I[4] + I[17] + min(I[21] + I[12], I[5])}) +
               I[21] - i1p;
  r.bound[4] = min(I[21] + I[10] + I[14] + min(I[14] + I[16], I[18]),
                   I[14] + I[15] + min(I[20] + I[10], I[8])) -
               2 * i1p;
  r.bound[5] = min(I[4] + min(I[14] + I[11], I[17] + I[8]),
                   I[10] + I[14] + min(I[6], I[11] - I[1])) +
               I[21] + I[15] - 2 * i1p;
  r.bound[6] = I[21] + I[10] + 2 * I[14] + I[11] + I[15] - 3 * i1p;
  r.bound[7] = 2 * I[21] + 2 * I[4] + I[11] + I[17] + I[15] - 2 * i1p;
  return r;
}

double corollary_margin(const RegionPolytope& region, double r1, double r2) {
  if (!region.feasible) return -kInf;
  double margin = kInf;
  for (int f = 0; f < RegionPolytope::kFamilyCount; ++f) {
    const double b = region.bound[f];
    if (std::isinf(b)) continue;
    const double lhs = RegionPolytope::kFamilyWeights[f][0] * r1 +
                       RegionPolytope::kFamilyWeights[f][1] * r2;
    margin = std::min(margin, b - lhs);
  }
  return margin;
}

PolygonResult polygon_vertices(const RegionPolytope& region) {
  PolygonResult out;
  if (!region.feasible) return out;

  struct Line {
    double a1, a2, b;
  };
  std::vector<Line> lines;
  bool caps_r1 = false, caps_r2 = false;
  for (int f = 0; f < RegionPolytope::kFamilyCount; ++f) {
    double b = region.bound[f];
    if (std::isinf(b)) continue;
    if (b < -kFeasTol) return out;  // contradictory bound: empty region
    if (b < 0.0) b = 0.0;
    const double a1 = RegionPolytope::kFamilyWeights[f][0];
    const double a2 = RegionPolytope::kFamilyWeights[f][1];
    lines.push_back({a1, a2, b});
    if (a1 > 0) caps_r1 = true;
    if (a2 > 0) caps_r2 = true;
  }
  if (!caps_r1 || !caps_r2) {
    out.unbounded = true;
    return out;
  }
  const size_t n_constraints = lines.size();
  lines.push_back({1.0, 0.0, 0.0});  // axis r1 = 0
  lines.push_back({0.0, 1.0, 0.0});  // axis r2 = 0

  for (size_t i = 0; i < lines.size(); ++i) {
    for (size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i].a1 * lines[j].a2 - lines[i].a2 * lines[j].a1;
      if (std::abs(det) < 1e-12) continue;
      double x = (lines[i].b * lines[j].a2 - lines[j].b * lines[i].a2) / det;
      double y = (lines[i].a1 * lines[j].b - lines[j].a1 * lines[i].b) / det;
      if (x < -1e-12 || y < -1e-12) continue;
      if (x <= 0.0) x = 0.0;  // also normalizes -0
      if (y <= 0.0) y = 0.0;
      bool inside = true;
      for (size_t k = 0; k < n_constraints; ++k) {
        const double slack =
            lines[k].b - (lines[k].a1 * x + lines[k].a2 * y);
        if (slack < -kFeasTol * std::max(1.0, std::abs(lines[k].b))) {
          inside = false;
          break;
        }
      }
      if (inside) out.vertices.push_back({x, y});
    }
  }

  std::sort(out.vertices.begin(), out.vertices.end(),
            [](const RatePoint& a, const RatePoint& b) {
              return a.r1 != b.r1 ? a.r1 < b.r1 : a.r2 < b.r2;
            });
  out.vertices.erase(
      std::unique(out.vertices.begin(), out.vertices.end(),
                  [](const RatePoint& a, const RatePoint& b) {
                    return std::abs(a.r1 - b.r1) <= 1e-12 &&
                           std::abs(a.r2 - b.r2) <= 1e-12;
                  }),
      out.vertices.end());
  return out;
}

namespace {

// One row of the split-rate system: sum of the listed variables compared
// against term `term`.  Variable order:
//   0 R1cd  1 R1cn  2 R1pd  3 R1pn  4 R2c  5 R2p  6 L2c  7 L2p
struct SplitRow {
  int term;
  bool lower;  // true: sum >= term;  false: sum <= term
  std::vector<int> vars;
};

const std::vector<SplitRow>& split_rows() {
  static const std::vector<SplitRow> rows = {
      {1, true, {6}},
      {2, true, {7}},
      {3, true, {6, 7}},
      {4, false, {3}},
      {5, false, {0, 1, 2, 3, 6, 4}},
      {6, false, {1, 2, 3}},
      {7, false, {2, 3}},
      {8, false, {2, 3, 6, 4}},
      {9, false, {1, 3}},
      {10, false, {3, 6, 4}},
      {11, false, {1, 2, 3, 6, 4}},
      {12, false, {1, 3, 6, 4}},
      {13, false, {6, 4}},
      {14, false, {7, 5}},
      {15, false, {0, 1, 6, 4, 7, 5}},
      {16, false, {1, 6, 4}},
      {17, false, {1, 7, 5}},
      {18, false, {1, 6, 4, 7, 5}},
      {19, false, {6, 4, 7, 5}},
      {20, false, {2}},
      {21, false, {0, 2}},
  };
  return rows;
}

// Minimizes the sum of the artificial variables over rows A x = b, x >= 0,
// b >= 0, starting from the identity basis given in `basis`.  Bland's rule;
// returns the optimal phase-1 objective value.
double phase1_minimum(std::vector<std::vector<double>>& A,
                      std::vector<double>& b, std::vector<int>& basis,
                      const std::vector<char>& artificial, double tol) {
  const int m = static_cast<int>(A.size());
  const int n = m > 0 ? static_cast<int>(A[0].size()) : 0;

  std::vector<double> d(n, 0.0);  // reduced costs
  for (int j = 0; j < n; ++j) d[j] = artificial[j] ? 1.0 : 0.0;
  for (int i = 0; i < m; ++i) {
    if (!artificial[basis[i]]) continue;
    for (int j = 0; j < n; ++j) d[j] -= A[i][j];
  }

  for (int iter = 0; iter < 20000; ++iter) {
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (d[j] < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best = kInf;
    for (int i = 0; i < m; ++i) {
      if (A[i][enter] <= tol) continue;
      const double ratio = b[i] / A[i][enter];
      if (ratio < best - 1e-15 ||
          (leave >= 0 && std::abs(ratio - best) <= 1e-15 &&
           basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) break;  // cannot happen: the objective is bounded below

    const double pivot = A[leave][enter];
    for (int j = 0; j < n; ++j) A[leave][j] /= pivot;
    b[leave] /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = A[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) A[i][j] -= f * A[leave][j];
      b[i] -= f * b[leave];
    }
    const double f = d[enter];
    for (int j = 0; j < n; ++j) d[j] -= f * A[leave][j];
    basis[leave] = enter;
  }
  // Objective value read off the final basis: total artificial residual.
  double z = 0.0;
  for (int i = 0; i < m; ++i)
    if (artificial[basis[i]]) z += std::max(0.0, b[i]);
  return z;
}

}  // namespace

LpStatus lp_project(const RateTerms& t, double r1, double r2, double tol) {
  if (r1 < 0.0 || r2 < 0.0) return LpStatus::Infeasible;
  const auto& I = t.I;
  if (std::isinf(I[1]) || std::isinf(I[2]) || std::isinf(I[3]))
    return LpStatus::Infeasible;

  struct BuildRow {
    std::array<double, 8> coeff{};
    double rhs = 0.0;
    int sense = 0;  // -1: <=, +1: >=, 0: ==
  };
  std::vector<BuildRow> rows;
  for (const auto& sr : split_rows()) {
    if (!sr.lower && std::isinf(I[sr.term])) continue;
    BuildRow br;
    for (int v : sr.vars) br.coeff[v] = 1.0;
    br.rhs = I[sr.term];
    br.sense = sr.lower ? +1 : -1;
    rows.push_back(br);
  }
  {
    BuildRow eq1;
    eq1.coeff = {1, 1, 1, 1, 0, 0, 0, 0};
    eq1.rhs = r1;
    rows.push_back(eq1);
    BuildRow eq2;
    eq2.coeff = {0, 0, 0, 0, 1, 1, 0, 0};
    eq2.rhs = r2;
    rows.push_back(eq2);
  }

  const int m = static_cast<int>(rows.size());
  int extra = 0;
  for (const auto& r : rows) extra += (r.sense == +1) ? 2 : 1;
  const int n = 8 + extra;

  std::vector<std::vector<double>> A(m, std::vector<double>(n, 0.0));
  std::vector<double> b(m, 0.0);
  std::vector<int> basis(m, -1);
  std::vector<char> artificial(n, 0);

  int col = 8;
  double norm = 1.0;
  for (int i = 0; i < m; ++i) {
    for (int v = 0; v < 8; ++v) A[i][v] = rows[i].coeff[v];
    b[i] = rows[i].rhs;
    norm = std::max(norm, std::abs(b[i]));
    if (rows[i].sense == -1) {
      A[i][col] = 1.0;  // slack, initially basic
      basis[i] = col++;
    } else if (rows[i].sense == +1) {
      A[i][col++] = -1.0;  // surplus
      A[i][col] = 1.0;     // artificial, initially basic
      artificial[col] = 1;
      basis[i] = col++;
    } else {
      A[i][col] = 1.0;  // artificial, initially basic
      artificial[col] = 1;
      basis[i] = col++;
    }
  }

  const double residual = phase1_minimum(A, b, basis, artificial, 1e-11);
  return residual <= tol * norm ? LpStatus::Feasible : LpStatus::Infeasible;
}

double Frontier::max_r2_at(double r1) const {
  if (points.empty()) return -kInf;
  if (r1 <= points.front().r1) return points.front().r2;
  if (r1 > points.back().r1) return -kInf;
  auto it = std::lower_bound(
      points.begin(), points.end(), r1,
      [](const RatePoint& p, double x) { return p.r1 < x; });
  const auto prev = it - 1;
  const double span = it->r1 - prev->r1;
  if (span <= 0.0) return std::max(prev->r2, it->r2);
  const double t = (r1 - prev->r1) / span;
  return prev->r2 + t * (it->r2 - prev->r2);
}

Frontier convex_closure(std::vector<RatePoint> pts) {
  Frontier out;
  std::vector<RatePoint> clean;
  clean.reserve(pts.size() + 2);
  for (const auto& p : pts) {
    if (!std::isfinite(p.r1) || !std::isfinite(p.r2)) continue;
    double x = p.r1, y = p.r2;
    if (x < -1e-12 || y < -1e-12) continue;
    if (x <= 0.0) x = 0.0;  // also normalizes -0
    if (y <= 0.0) y = 0.0;
    clean.push_back({x, y});
  }
  if (clean.empty()) return out;

  double mx = 0.0, my = 0.0;
  for (const auto& p : clean) {
    mx = std::max(mx, p.r1);
    my = std::max(my, p.r2);
  }
  // Down-closedness makes the axis projections genuine region points.
  clean.push_back({0.0, my});
  clean.push_back({mx, 0.0});

  std::sort(clean.begin(), clean.end(),
            [](const RatePoint& a, const RatePoint& b) {
              return a.r1 != b.r1 ? a.r1 < b.r1 : a.r2 > b.r2;
            });
  // Keep one point per abscissa (the highest), then the Pareto staircase.
  std::vector<RatePoint> stair;
  stair.reserve(clean.size());
  for (const auto& p : clean) {
    if (!stair.empty() && stair.back().r1 == p.r1) continue;
    stair.push_back(p);
  }
  std::vector<RatePoint> pareto;
  pareto.reserve(stair.size());
  double best = -kInf;
  for (auto it = stair.rbegin(); it != stair.rend(); ++it) {
    if (it->r2 > best) {
      pareto.push_back(*it);
      best = it->r2;
    }
  }
  std::reverse(pareto.begin(), pareto.end());
  pareto.erase(std::unique(pareto.begin(), pareto.end(),
                           [](const RatePoint& a, const RatePoint& b) {
                             return std::abs(a.r1 - b.r1) <= 1e-12 &&
                                    std::abs(a.r2 - b.r2) <= 1e-12;
                           }),
               pareto.end());

  // Concave (upper) chain: drop points on or below the chord of their
  // neighbours.
  std::vector<RatePoint> hull;
  hull.reserve(pareto.size());
  for (const auto& p : pareto) {
    while (hull.size() >= 2) {
      const RatePoint& o = hull[hull.size() - 2];
      const RatePoint& a = hull.back();
      const double cross = (a.r1 - o.r1) * (p.r2 - o.r2) -
                           (a.r2 - o.r2) * (p.r1 - o.r1);
      if (cross >= -1e-12)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  out.points = std::move(hull);
  return out;
}

bool frontier_dominates(const Frontier& outer, const Frontier& inner,
                        double tol) {
  if (inner.empty()) return true;
  if (outer.empty()) return false;
  if (inner.max_r1() > outer.max_r1() + tol) return false;
  for (const auto& v : inner.points) {
    const double x = std::min(v.r1, outer.max_r1());
    if (v.r2 > outer.max_r2_at(x) + tol) return false;
  }
  return true;
}

std::vector<std::vector<int>> simplex_grid(int dims, int denom) {
  std::vector<std::vector<int>> out;
  if (dims < 0 || denom < 0) return out;
  std::vector<int> cur(dims, 0);
  // Iterative odometer over tuples with running-sum budget.
  while (true) {
    out.push_back(cur);
    int pos = dims - 1;
    while (pos >= 0) {
      int used = 0;
      for (int k = 0; k < pos; ++k) used += cur[k];
      if (cur[pos] + used < denom) {
        ++cur[pos];
        for (int k = pos + 1; k < dims; ++k) cur[k] = 0;
        break;
      }
      cur[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

RateTerms random_consistent_terms(std::uint64_t& state) {
  // splitmix64 stream; self-contained so the draw sequence is identical
  // across platforms and standard libraries.
  auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  };
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * next(); };

  for (;;) {
    GaussianScenario s;
    s.P1 = uni(0.2, 12);
    s.P2 = uni(0.2, 12);
    s.h21 = uni(0.1, 4);
    s.h31 = uni(0.1, 2);
    s.h32 = uni(0.1, 2);
    s.h41 = uni(0.1, 2);
    s.h42 = uni(0.1, 2);
    s.N2 = uni(0.05, 4);
    s.N3 = uni(0.05, 4);
    s.N4 = uni(0.05, 4);

    PowerAllocation a;
    const int strat = std::min(2, static_cast<int>(next() * 3.0));
    a.strategy = strat == 0   ? Strategy::Classical
                 : strat == 1 ? Strategy::NoDelay
                              : Strategy::Lookahead;
    double b[6], bsum = 0.0;
    for (double& x : b) {
      x = next();
      bsum += x;
    }
    const double bscale = bsum > 0 ? next() / bsum : 0.0;
    a.bp1 = b[0] * bscale;
    a.b1 = b[1] * bscale;
    a.bp2 = b[2] * bscale;
    a.b2 = b[3] * bscale;
    a.b3 = b[4] * bscale;
    a.b4 = b[5] * bscale;
    double g[3], gsum = 0.0;
    for (double& x : g) {
      x = next();
      gsum += x;
    }
    const double gscale = gsum > 0 ? next() / gsum : 0.0;
    a.g1 = g[0] * gscale;
    a.g2 = g[1] * gscale;
    a.g3 = g[2] * gscale;
    if (a.strategy == Strategy::Lookahead) {
      a.bp2 = 0.0;
      a.b2 = 0.0;
    }
    if (a.strategy == Strategy::NoDelay) {
      a.relay_beta = next();
      const double demand = relay_power_demand(s, a, a.relay_beta);
      const double hmax = demand > 0 ? std::sqrt(s.P2 / demand) : 1.0;
      a.relay_h = uni(0.05, 1.0) * hmax;
    }
    if (!validate_allocation(a, s).valid) continue;
    const bool closed_form_coeffs = next() < 0.5;
    try {
      const DpcCoefficients c =
          closed_form_coeffs ? resolve_dpc(DpcSelection::paper(), s, a)
                             : DpcCoefficients{};
      return evaluate_terms(s, a, c);
    } catch (const NegativeThetaArgument&) {
      continue;  // not a realizable rate point; redraw
    }
  }
}

int effective_thread_count(int requested) {
  long n = requested > 0
               ? requested
               : static_cast<long>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("CCIFC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = std::min(n, v);
  }
  return static_cast<int>(std::max(1L, n));
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void assign_fractions(PowerAllocation& a, const std::array<double, 6>& beta,
                      const std::array<double, 3>& gamma) {
  a.bp1 = beta[0];
  a.b1 = beta[1];
  a.bp2 = beta[2];
  a.b2 = beta[3];
  a.b3 = beta[4];
  a.b4 = beta[5];
  a.g1 = gamma[0];
  a.g2 = gamma[1];
  a.g3 = gamma[2];
}

std::vector<double> relay_gain_candidates(const GaussianScenario& s,
                                          const PowerAllocation& a) {
  const double demand = relay_power_demand(s, a, a.relay_beta);
  std::vector<double> hs;
  if (demand <= 0.0) {
    hs.push_back(1.0);
    return hs;
  }
  const double hmax = std::sqrt(s.P2 / demand);
  for (double f : {0.5, 0.75, 0.9, 1.0}) {
    const double h = f * hmax;
    if (h > 0.0) hs.push_back(h);
  }
  if (1.0 <= hmax * (1.0 + 1e-12)) hs.push_back(1.0);
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end(),
                       [](double a, double b) {
                         return std::abs(a - b) <= 1e-12 * std::max(1.0, b);
                       }),
           hs.end());
  return hs;
}

void merge_stats(SweepStats& into, const SweepStats& from) {
  into.allocations_enumerated += from.allocations_enumerated;
  into.invalid_allocations += from.invalid_allocations;
  into.evaluations += from.evaluations;
  into.feasible_points += from.feasible_points;
  into.negative_theta_skips += from.negative_theta_skips;
  for (int k = 0; k < 22; ++k)
    into.negative_theta_by_term[k] += from.negative_theta_by_term[k];
  into.precondition_failures += from.precondition_failures;
  into.unbounded_skips += from.unbounded_skips;
}

}  // namespace

SweepResult sweep_frontier(const GaussianScenario& s, Strategy strategy,
                           const SweepOptions& opt) {
  if (const auto v = validate_scenario(s); !v.valid)
    throw std::invalid_argument("invalid scenario: " + v.violation);
  if (opt.resolution < 2)
    throw std::invalid_argument("sweep resolution must be at least 2");
  if (strategy == Strategy::NoDelay && opt.relay_resolution < 1)
    throw std::invalid_argument("relay resolution must be at least 1");

  static const char* kBetaKeys[6] = {"bp1", "b1", "bp2", "b2", "b3", "b4"};
  static const char* kGammaKeys[3] = {"g1", "g2", "g3"};
  std::array<double, 6> beta_pin;
  beta_pin.fill(kNan);
  std::array<double, 3> gamma_pin;
  gamma_pin.fill(kNan);
  double relay_pin = kNan;
  for (const auto& [key, value] : opt.masks) {
    if (!is_valid_mask_key(key))
      throw std::invalid_argument("unknown mask key: " + key);
    bool placed = false;
    for (int k = 0; k < 6; ++k)
      if (key == kBetaKeys[k]) {
        beta_pin[k] = value;
        placed = true;
      }
    for (int k = 0; k < 3; ++k)
      if (key == kGammaKeys[k]) {
        gamma_pin[k] = value;
        placed = true;
      }
    if (key == "relay_beta") {
      if (strategy != Strategy::NoDelay)
        throw std::invalid_argument(
            "mask relay_beta applies only to the delayed-relaying strategy");
      relay_pin = value;
      placed = true;
    }
    (void)placed;
  }
  if (strategy == Strategy::Lookahead) {
    // These two fractions must vanish under unlimited look-ahead; pin them
    // unless the caller already did.
    if (std::isnan(beta_pin[2])) beta_pin[2] = 0.0;
    if (std::isnan(beta_pin[3])) beta_pin[3] = 0.0;
  }

  std::vector<int> beta_active, gamma_active;
  for (int k = 0; k < 6; ++k)
    if (std::isnan(beta_pin[k])) beta_active.push_back(k);
  for (int k = 0; k < 3; ++k)
    if (std::isnan(gamma_pin[k])) gamma_active.push_back(k);

  const int K = opt.resolution - 1;
  const auto beta_combos =
      simplex_grid(static_cast<int>(beta_active.size()), K);
  const auto gamma_combos =
      simplex_grid(static_cast<int>(gamma_active.size()), K);

  std::vector<double> relay_betas;
  if (strategy == Strategy::NoDelay) {
    if (!std::isnan(relay_pin)) {
      relay_betas.push_back(relay_pin);
    } else {
      const int kr = opt.relay_resolution - 1;
      if (kr == 0) {
        relay_betas.push_back(0.0);
      } else {
        for (int j = 0; j <= kr; ++j)
          relay_betas.push_back(static_cast<double>(j) / kr);
      }
    }
  } else {
    relay_betas.push_back(0.0);
  }

  std::vector<DpcSelection> branches;
  if (opt.dpc.kind == DpcSelection::Kind::Auto) {
    branches.push_back(DpcSelection::paper());
    branches.push_back(DpcSelection::zero());
  } else {
    branches.push_back(opt.dpc);
  }

  const int nthreads = std::max(
      1, std::min<int>(effective_thread_count(opt.max_threads),
                       static_cast<int>(beta_combos.size())));

  struct Worker {
    std::vector<RatePoint> pts;
    SweepStats st;
  };
  std::vector<Worker> workers(nthreads);

  auto run = [&](int tid) {
    Worker& w = workers[tid];
    std::array<double, 6> beta_vals{};
    std::array<double, 3> gamma_vals{};
    for (size_t bi = tid; bi < beta_combos.size();
         bi += static_cast<size_t>(nthreads)) {
      for (int k = 0; k < 6; ++k)
        beta_vals[k] = std::isnan(beta_pin[k]) ? 0.0 : beta_pin[k];
      for (size_t j = 0; j < beta_active.size(); ++j)
        beta_vals[beta_active[j]] =
            static_cast<double>(beta_combos[bi][j]) / K;
      for (const auto& gc : gamma_combos) {
        for (int k = 0; k < 3; ++k)
          gamma_vals[k] = std::isnan(gamma_pin[k]) ? 0.0 : gamma_pin[k];
        for (size_t j = 0; j < gamma_active.size(); ++j)
          gamma_vals[gamma_active[j]] = static_cast<double>(gc[j]) / K;

        PowerAllocation alloc{};
        alloc.strategy = strategy;
        assign_fractions(alloc, beta_vals, gamma_vals);

        for (double rb : relay_betas) {
          std::vector<double> gains{1.0};
          if (strategy == Strategy::NoDelay) {
            alloc.relay_beta = rb;
            gains = relay_gain_candidates(s, alloc);
            if (gains.empty()) continue;
          }
          for (double h : gains) {
            if (strategy == Strategy::NoDelay) alloc.relay_h = h;
            ++w.st.allocations_enumerated;
            if (const auto val = validate_allocation(alloc, s); !val.valid) {
              ++w.st.invalid_allocations;
              continue;
            }
            const GaussianScenario eff =
                strategy == Strategy::NoDelay
                    ? no_delay_scenario(s, alloc.relay_beta, alloc.relay_h)
                    : s;
            for (const auto& branch : branches) {
              ++w.st.evaluations;
              RateTerms terms;
              try {
                const DpcCoefficients coeffs =
                    resolve_dpc(branch, eff, alloc);
                terms = evaluate_terms(s, alloc, coeffs);
              } catch (const NegativeThetaArgument& e) {
                ++w.st.negative_theta_skips;
                const int idx = e.term_index();
                if (idx >= 0 && idx < 22)
                  ++w.st.negative_theta_by_term[idx];
                continue;
              }
              const RegionPolytope region = corollary_region(terms);
              if (!region.feasible) {
                ++w.st.precondition_failures;
                continue;
              }
              const PolygonResult poly = polygon_vertices(region);
              if (poly.unbounded) {
                ++w.st.unbounded_skips;
                continue;
              }
              if (poly.vertices.empty()) continue;
              ++w.st.feasible_points;
              w.pts.insert(w.pts.end(), poly.vertices.begin(),
                           poly.vertices.end());
              if (w.pts.size() > 300000)
                w.pts = convex_closure(std::move(w.pts)).points;
            }
          }
        }
      }
    }
  };

  if (nthreads == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) threads.emplace_back(run, t);
    for (auto& t : threads) t.join();
  }

  SweepResult result;
  std::vector<RatePoint> all;
  for (auto& w : workers) {
    merge_stats(result.stats, w.st);
    all.insert(all.end(), w.pts.begin(), w.pts.end());
  }
  result.frontier = convex_closure(std::move(all));
  return result;
}

std::string frontier_csv(const Frontier& frontier, std::string_view strategy,
                         std::string_view scenario,
                         std::string_view extra_header,
                         std::string_view extra_value) {
  std::string out = "R1,R2,strategy,scenario";
  if (!extra_header.empty()) {
    out += ',';
    out += extra_header;
  }
  out += '\n';
  char buf[64];
  for (const auto& p : frontier.points) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g", p.r1, p.r2);
    out += buf;
    out += ',';
    out += strategy;
    out += ',';
    out += scenario;
    if (!extra_header.empty()) {
      out += ',';
      out += extra_value;
    }
    out += '\n';
  }
  return out;
}

}  // namespace ccifc
