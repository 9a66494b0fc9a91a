#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ccifc/rate_terms.hpp"
#include "ccifc/scenario.hpp"

namespace ccifc {

/// A point in the two-user rate plane, in bits per channel use.
struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Closed-form description of the rate region reachable by one fixed power
/// allocation: the set of (R1, R2) >= 0 with a1*R1 + a2*R2 <= bound for each
/// of eight weighted-sum families, provided the two encoding-rate
/// preconditions hold.  A bound of +infinity means the family imposes no
/// constraint.  When `feasible` is false the region is empty.
struct RegionPolytope {
  static constexpr int kFamilyCount = 8;
  /// (a1, a2) weights per family, in declaration order:
  /// R1; R2; R1+R2; 2R1+R2; R1+2R2; 2R1+2R2; 2R1+3R2; 3R1+2R2.
  static const std::array<std::array<int, 2>, kFamilyCount> kFamilyWeights;

  std::array<double, kFamilyCount> bound{};
  bool feasible = true;
};

/// Evaluates the eight closed-form weighted-sum bounds for one term vector.
RegionPolytope corollary_region(const RateTerms& terms);

/// Smallest slack over the finite families at (r1, r2); negative means the
/// point lies outside.  Returns -infinity when the polytope is infeasible.
double corollary_margin(const RegionPolytope& region, double r1, double r2);

/// Corner points of a RegionPolytope intersected with the nonnegative
/// quadrant.  `unbounded` is set when the finite families fail to cap one of
/// the rate axes (possible only with hand-picked cancellation coefficients);
/// such regions carry no usable corner list.
struct PolygonResult {
  std::vector<RatePoint> vertices;
  bool unbounded = false;
};

PolygonResult polygon_vertices(const RegionPolytope& region);

/// Feasibility of the full split-rate system at a target rate pair: eight
/// nonnegative split variables, two equality rows tying the splits to
/// (r1, r2), three lower bounds on the encoding-rate variables, and eighteen
/// upper bounds drawn from the term vector.  The constraint matrix is the
/// same for every strategy; only the term values differ.  Solved exactly with
/// a dense phase-1 simplex using Bland's rule.
enum class LpStatus { Feasible, Infeasible };

LpStatus lp_project(const RateTerms& terms, double r1, double r2,
                    double tol = 1e-9);

/// Upper-right boundary of a convex, down-closed union of rate points:
/// a chain from (0, max R2) to (max R1, 0) with r1 strictly increasing and
/// r2 strictly decreasing.  An empty chain means the region is empty.
struct Frontier {
  std::vector<RatePoint> points;

  bool empty() const { return points.empty(); }
  double max_r1() const { return points.empty() ? 0.0 : points.back().r1; }
  double max_r2() const { return points.empty() ? 0.0 : points.front().r2; }

  /// Largest r2 on or below the frontier at abscissa r1, by linear
  /// interpolation between chain vertices.  Returns -infinity for r1 beyond
  /// max_r1() (past the right end the region is empty).
  double max_r2_at(double r1) const;
};

/// Collapses a point cloud to its upper-right convex boundary: keeps the
/// Pareto-maximal staircase, closes it under convex combination, and anchors
/// the chain on both axes.  Down-closedness of the swept regions makes the
/// axis anchors genuine region points.
Frontier convex_closure(std::vector<RatePoint> points);

/// True when every vertex of `inner` lies weakly inside `outer`
/// (r2 <= outer.max_r2_at(r1) + tol, and the r1 reach is covered).  For two
/// convex chains this is equivalent to full set containment.
bool frontier_dominates(const Frontier& outer, const Frontier& inner,
                        double tol);

/// Grid sweep configuration.  `resolution` grid points span [0, 1] on every
/// active power-fraction axis (so the step is 1/(resolution-1)); fractions
/// are enumerated jointly under their budget constraints.  Masked keys are
/// pinned to the given value and excluded from enumeration.
struct SweepOptions {
  int resolution = 7;
  int relay_resolution = 7;
  DpcSelection dpc{};
  MaskSet masks{};
  int max_threads = 0;  ///< 0 = hardware concurrency (capped by CCIFC_THREADS)
};

struct SweepStats {
  std::uint64_t allocations_enumerated = 0;  ///< grid tuples before validation
  std::uint64_t invalid_allocations = 0;
  std::uint64_t evaluations = 0;  ///< term-vector evaluations (per coef branch)
  std::uint64_t feasible_points = 0;  ///< evaluations yielding a nonempty region
  std::uint64_t negative_theta_skips = 0;
  std::array<std::uint64_t, 22> negative_theta_by_term{};
  std::uint64_t precondition_failures = 0;  ///< encoding-rate precondition
  std::uint64_t unbounded_skips = 0;
};

struct SweepResult {
  Frontier frontier;
  SweepStats stats;
};

/// Enumerates the power-allocation grid for one strategy, evaluates the
/// closed-form region at every feasible point, and returns the convex closure
/// of the union.  With the default automatic coefficient selection each
/// allocation is evaluated under both interference-precoding branches and the
/// union keeps whichever is larger.  Throws std::invalid_argument for an
/// invalid scenario or a resolution below 2.
SweepResult sweep_frontier(const GaussianScenario& scenario, Strategy strategy,
                           const SweepOptions& options = {});

/// All nonnegative integer tuples of length `dims` with sum <= `denom`,
/// in lexicographic order.  dims == 0 yields one empty tuple.
std::vector<std::vector<int>> simplex_grid(int dims, int denom);

/// Random nonnegative bound vector drawn as a genuine strategy evaluation of
/// a random scenario and power allocation (all three strategies, both
/// precoder branches, using a self-contained portable random stream).  This
/// is exactly the class on which the closed-form family reduction of the
/// split-rate system is exact, so it is the sampling domain for the
/// membership cross-check oracle.  Synthetic vectors that merely respect
/// per-term monotonicity are not enough: the reduction drops candidate sums
/// (for example an I21+I6 cap on R1 in favor of I21+I9) that only stay
/// redundant under the joint structure of real evaluations, and the two
/// membership tests genuinely differ on such hand-made inputs.
RateTerms random_consistent_terms(std::uint64_t& state);

/// Worker count: `requested` if positive, else hardware concurrency, both
/// capped by the CCIFC_THREADS environment variable when set.
int effective_thread_count(int requested = 0);

/// CSV with header R1,R2,strategy,scenario (plus one optional extra column),
/// one row per frontier vertex, nine significant digits.
std::string frontier_csv(const Frontier& frontier, std::string_view strategy,
                         std::string_view scenario,
                         std::string_view extra_header = {},
                         std::string_view extra_value = {});

}  // namespace ccifc
