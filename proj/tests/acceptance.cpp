// Acceptance harness: ten end-to-end checks, one PASS/WARN/FAIL line each.
// Exit code is the number of failures.  Tolerances are pinned here on
// purpose; loosening them is a behavior change, not a cleanup.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ccifc/baselines.hpp"
#include "ccifc/dmc.hpp"
#include "ccifc/rate_terms.hpp"
#include "ccifc/region.hpp"
#include "ccifc/scenario.hpp"

using namespace ccifc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int g_failures = 0;
int g_warnings = 0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int index, bool pass, bool warn_only, const char* fmt, ...) {
  const char* verdict = pass ? "PASS" : (warn_only ? "WARN" : "FAIL");
  if (!pass && warn_only) ++g_warnings;
  if (!pass && !warn_only) ++g_failures;
  std::printf("%2d %s ", index, verdict);
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::printf("\n");
  std::fflush(stdout);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

PowerAllocation random_alloc(std::uint64_t& state) {
  PowerAllocation a;
  double* b[] = {&a.bp1, &a.b1, &a.bp2, &a.b2, &a.b3, &a.b4};
  double* g[] = {&a.g1, &a.g2, &a.g3};
  double sb = 0, sg = 0;
  for (double* f : b) sb += (*f = uniform(state));
  for (double* f : g) sg += (*f = uniform(state));
  const double cb = (0.05 + 0.9 * uniform(state)) / sb;
  const double cg = (0.05 + 0.9 * uniform(state)) / sg;
  for (double* f : b) *f *= cb;
  for (double* f : g) *f *= cg;
  return a;
}

// ---------------------------------------------------------------------------
// 1. Closed-form region vs the explicit split-rate linear program.
// ---------------------------------------------------------------------------
void criterion_region_oracle() {
  const auto t0 = Clock::now();
  std::uint64_t state = 1001;
  int feasible_vectors = 0, disagreements = 0;
  long long points = 0;
  double worst = 0.0;

  for (int attempt = 0; attempt < 10000 && feasible_vectors < 100; ++attempt) {
    const RateTerms terms = random_consistent_terms(state);
    const RegionPolytope region = corollary_region(terms);
    if (!region.feasible) continue;
    ++feasible_vectors;

    double max_bound = 0.0;
    for (const double b : region.bound)
      if (std::isfinite(b)) max_bound = std::max(max_bound, b);
    const double span = 1.2 * std::max(max_bound, 1e-3);
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) {
        const double r1 = span * i / 49.0;
        const double r2 = span * j / 49.0;
        const double margin = corollary_margin(region, r1, r2);
        if (std::abs(margin) <= 1e-9) continue;
        const bool lp_in = lp_project(terms, r1, r2) == LpStatus::Feasible;
        ++points;
        if ((margin > 0.0) != lp_in) ++disagreements;
      }
    }
  }
  const double dt = seconds_since(t0);
  const bool pass =
      feasible_vectors >= 100 && disagreements == 0 && dt < 60.0;
  report(1, pass, false,
         "closed-form region vs split-rate LP: %d vectors, %lld grid points, "
         "%d disagreements (tol 1e-9), %.1f s (limit 60)",
         feasible_vectors, points, disagreements, dt);
}

// ---------------------------------------------------------------------------
// 2. Relay strategy with unit gain and zero mixing reduces to classical.
// ---------------------------------------------------------------------------
void criterion_reduction_identity() {
  const GaussianScenario s = figure_preset("fig6")->scenario;
  std::uint64_t state = 2002;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    PowerAllocation a = random_alloc(state);
    const DpcCoefficients d = k % 2 ? resolve_dpc(DpcSelection::paper(), s, a)
                                    : DpcCoefficients{};
    const RateTerms cl = terms_classical(s, a, d);
    a.strategy = Strategy::NoDelay;
    a.relay_beta = 0.0;
    a.relay_h = 1.0;
    const RateTerms nd = terms_no_delay(s, a, d);
    for (int i = 1; i <= 21; ++i)
      worst = std::max(worst, std::abs(nd.I[i] - cl.I[i]));
    worst = std::max(worst, std::abs(nd.I3prime - cl.I3prime));
  }
  report(2, worst <= 1e-12, false,
         "unit-gain zero-mixing relay reduces to classical: max |delta| = "
         "%.3g (tol 1e-12) over 1000 allocations",
         worst);
}

// ---------------------------------------------------------------------------
// 3. Joint power rescaling with inverse fraction scaling is exact.
// ---------------------------------------------------------------------------
void criterion_power_scaling() {
  const GaussianScenario base = figure_preset("fig6")->scenario;
  std::uint64_t state = 3003;
  double worst = 0.0;
  for (const double c : {2.0, 10.0}) {
    GaussianScenario scaled = base;
    scaled.P1 *= c;
    scaled.P2 *= c;
    for (int k = 0; k < 1000; ++k) {
      const PowerAllocation a = random_alloc(state);
      PowerAllocation asc = a;
      double* fr[] = {&asc.bp1, &asc.b1, &asc.bp2, &asc.b2, &asc.b3,
                      &asc.b4,  &asc.g1, &asc.g2,  &asc.g3};
      for (double* f : fr) *f /= c;
      const RateTerms t1 =
          terms_classical(base, a, resolve_dpc(DpcSelection::paper(), base, a));
      const RateTerms t2 = terms_classical(
          scaled, asc, resolve_dpc(DpcSelection::paper(), scaled, asc));
      for (int i = 1; i <= 21; ++i)
        worst = std::max(worst, std::abs(t2.I[i] - t1.I[i]) /
                                    std::max(1.0, std::abs(t1.I[i])));
    }
  }
  report(3, worst <= 1e-12, false,
         "power rescaling (c in {2,10}) reproduces every term: max rel delta "
         "= %.3g (tol 1e-12)",
         worst);
}

// ---------------------------------------------------------------------------
// 4. Reference-scenario ordering: all strategies beat the no-cooperation
//    baseline, with a visible lead for pre-decoding.
// ---------------------------------------------------------------------------
void criterion_strategy_ordering() {
  const auto t0 = Clock::now();
  GaussianScenario s = figure_preset("fig6")->scenario;
  s.h21 = 4.0;
  const SweepOptions opt;  // default grids
  const Frontier classical =
      sweep_frontier(s, Strategy::Classical, opt).frontier;
  const Frontier nodelay = sweep_frontier(s, Strategy::NoDelay, opt).frontier;
  const Frontier lookahead =
      sweep_frontier(s, Strategy::Lookahead, opt).frontier;
  const Frontier hk = hk_region(s, opt).frontier;
  const double dt = seconds_since(t0);

  const bool dom_c = frontier_dominates(classical, hk, 1e-6);
  const bool dom_n = frontier_dominates(nodelay, hk, 1e-6);
  const bool dom_l = frontier_dominates(lookahead, hk, 1e-6);
  const double lead = lookahead.max_r1() - hk.max_r1();

  const bool hard_pass = dom_c && dom_n && dom_l && dt < 600.0;
  if (hard_pass && lead < 0.05) {
    report(4, false, true,
           "all strategies dominate the baseline, but the pre-decoding "
           "max-R1 lead %.3f < 0.05 (grid-resolution-limited?)",
           lead);
    return;
  }
  report(4, hard_pass, false,
         "strategies dominate baseline (tol 1e-6): classical=%d nodelay=%d "
         "lookahead=%d; pre-decoding max-R1 lead %.3f (>= 0.05), %.1f s "
         "(limit 600)",
         dom_c, dom_n, dom_l, lead, dt);
}

// ---------------------------------------------------------------------------
// 5. Outer bound contains every achievable region and the baseline.
// ---------------------------------------------------------------------------
void criterion_outer_containment() {
  const auto preset = figure_preset("fig7");
  const Frontier outer = mimo_bc_outer(preset->scenario);
  bool all = true;
  for (const double h21 : preset->h21_values) {
    GaussianScenario s = preset->scenario;
    s.h21 = h21;
    const SweepOptions opt;
    all = all && frontier_dominates(
                     outer, sweep_frontier(s, Strategy::Classical, opt).frontier,
                     1e-6);
    all = all && frontier_dominates(
                     outer, sweep_frontier(s, Strategy::NoDelay, opt).frontier,
                     1e-6);
    all = all &&
          frontier_dominates(
              outer, sweep_frontier(s, Strategy::Lookahead, opt).frontier,
              1e-6);
    all = all && frontier_dominates(outer, hk_region(s, opt).frontier, 1e-6);
  }
  report(5, all, false,
         "sum-power outer bound contains all achievable regions and the "
         "baseline on the outer-bound scenario (tol 1e-6)");
}

// ---------------------------------------------------------------------------
// 6. The classical region is contained in the instantaneous-relay region.
// ---------------------------------------------------------------------------
void criterion_classical_in_nodelay() {
  bool all = true;
  for (const double h21 : {1.0, 4.0}) {
    GaussianScenario s = figure_preset("fig6")->scenario;
    s.h21 = h21;
    const SweepOptions opt;
    const Frontier classical =
        sweep_frontier(s, Strategy::Classical, opt).frontier;
    const Frontier nodelay = sweep_frontier(s, Strategy::NoDelay, opt).frontier;
    all = all && frontier_dominates(nodelay, classical, 1e-9);
  }
  report(6, all, false,
         "classical region contained in the instantaneous-relay region "
         "(tol 1e-9, both link gains)");
}

// ---------------------------------------------------------------------------
// 7. Cleaner overheard links only help; the baseline never notices them.
// ---------------------------------------------------------------------------
void criterion_noise_monotonicity() {
  const auto preset = figure_preset("fig10");
  GaussianScenario s = preset->scenario;
  s.h21 = preset->h21_values.front();
  const SweepOptions opt;

  bool nested = true;
  Frontier prev;
  for (const double n2 : preset->n2_values) {  // listed noisiest first
    GaussianScenario sn = s;
    sn.N2 = n2;
    Frontier f = sweep_frontier(sn, Strategy::Lookahead, opt).frontier;
    if (!prev.empty()) nested = nested && frontier_dominates(f, prev, 1e-9);
    prev = std::move(f);
  }

  bool baseline_fixed = true;
  std::vector<RatePoint> reference;
  for (const double n2 : preset->n2_values) {
    GaussianScenario sn = s;
    sn.N2 = n2;
    const Frontier f = hk_region(sn, opt).frontier;
    if (reference.empty()) {
      reference = f.points;
      continue;
    }
    if (f.points.size() != reference.size()) {
      baseline_fixed = false;
      continue;
    }
    for (size_t i = 0; i < reference.size(); ++i)
      baseline_fixed = baseline_fixed &&
                       f.points[i].r1 == reference[i].r1 &&
                       f.points[i].r2 == reference[i].r2;
  }
  report(7, nested && baseline_fixed, false,
         "pre-decoding frontiers nested as the overheard link cleans up "
         "(tol 1e-9): %s; baseline bit-identical across noise levels: %s",
         nested ? "yes" : "no", baseline_fixed ? "yes" : "no");
}

// ---------------------------------------------------------------------------
// 8. Information engine vs an independent direct-summation reference.
// ---------------------------------------------------------------------------
double mi_reference(const JointPmf& j, unsigned a, unsigned b, unsigned c) {
  const auto key = [&](unsigned subset, const int coord[6]) {
    long k = 0;
    for (int axis = 0; axis < 6; ++axis)
      if (subset & (1u << axis)) k = k * j.dims[axis] + coord[axis];
    return k;
  };
  std::map<long, double> p_abc, p_ac, p_bc, p_c;
  const unsigned abc = a | b | c, ac = a | c, bc = b | c;
  int coord[6] = {0, 0, 0, 0, 0, 0};
  for (double v : j.p) {
    if (v > 0.0) {
      p_abc[key(abc, coord)] += v;
      p_ac[key(ac, coord)] += v;
      p_bc[key(bc, coord)] += v;
      p_c[key(c, coord)] += v;
    }
    for (int axis = 5; axis >= 0; --axis) {
      if (++coord[axis] < j.dims[axis]) break;
      coord[axis] = 0;
    }
  }
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) coord[i] = 0;
  for (double v : j.p) {
    if (v > 0.0)
      acc += v * std::log2(p_abc[key(abc, coord)] * p_c[key(c, coord)] /
                           (p_ac[key(ac, coord)] * p_bc[key(bc, coord)]));
    for (int axis = 5; axis >= 0; --axis) {
      if (++coord[axis] < j.dims[axis]) break;
      coord[axis] = 0;
    }
  }
  return acc;
}

void criterion_information_engine() {
  std::uint64_t state = 8008;
  double worst_ref = 0.0, worst_chain = 0.0, worst_neg = 0.0;
  const unsigned combos[][3] = {
      {AxX1, AxY3, 0},
      {AxX1 | AxT, AxY4, AxX2},
      {AxX2, AxY3 | AxY4, AxT | AxX1},
  };
  for (int trial = 0; trial < 100; ++trial) {
    JointPmf j;
    j.dims = {2, 2, 2, 2, 2, 2};
    j.p.resize(64);
    double sum = 0.0;
    for (double& v : j.p) sum += (v = uniform(state) + 1e-6);
    for (double& v : j.p) v /= sum;

    for (const auto& cmb : combos) {
      const double got = mutual_information(j, cmb[0], cmb[1], cmb[2]);
      worst_ref = std::max(
          worst_ref, std::abs(got - mi_reference(j, cmb[0], cmb[1], cmb[2])));
      worst_neg = std::max(worst_neg, -got);
    }
    const double joint = mutual_information(j, AxX1 | AxX2, AxY3);
    const double split = mutual_information(j, AxX1, AxY3) +
                         mutual_information(j, AxX2, AxY3, AxX1);
    worst_chain = std::max(worst_chain, std::abs(joint - split));
  }
  report(8, worst_ref <= 1e-12 && worst_chain <= 1e-10 && worst_neg <= 1e-10,
         false,
         "information engine: reference gap %.3g (tol 1e-12), chain-rule gap "
         "%.3g, worst negativity %.3g (tol 1e-10), 100 joints",
         worst_ref, worst_chain, worst_neg);
}

// ---------------------------------------------------------------------------
// 9. Finite-channel capacity consistency on the frozen reference channel.
// ---------------------------------------------------------------------------
void criterion_capacity_consistency() {
  const auto t0 = Clock::now();
  const FiniteChannel ch = *builtin_channel("degraded-binary");

  const AssignmentCheck identity = verify_assignment_identity(ch);
  const bool identity_ok = identity.max_gap <= 1e-10;

  bool monotone = true, never_refused = true;
  Frontier prev;
  for (int t_max = 1; t_max <= 4; ++t_max) {
    CapacityOptions opt;
    opt.t_max = t_max;
    const CapacityResult res = capacity_degraded(ch, opt);
    never_refused = never_refused && !res.refused;
    if (t_max > 1 && !res.refused)
      monotone = monotone && frontier_dominates(res.frontier, prev, 1e-9);
    prev = res.frontier;
  }
  const double dt = seconds_since(t0);
  report(9, identity_ok && monotone && never_refused, false,
         "capacity consistency: direct-vs-assigned gap %.3g over %llu "
         "families (tol 1e-10); frontier monotone in alphabet bound 1..4: "
         "%s; preconditions held: %s; %.1f s",
         identity.max_gap,
         static_cast<unsigned long long>(identity.families),
         monotone ? "yes" : "no", never_refused ? "yes" : "no", dt);
}

// ---------------------------------------------------------------------------
// 10. Rate-kernel units (base-2 convention).
// ---------------------------------------------------------------------------
void criterion_kernel_units() {
  const bool pass = theta(0.0) == 0.0 && theta(3.0) == 1.0 && theta(1.0) == 0.5;
  report(10, pass, false,
         "rate kernel units: theta(0)=%g theta(3)=%g theta(1)=%g "
         "(exact 0, 1, 0.5)",
         theta(0.0), theta(3.0), theta(1.0));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_region_oracle();
  criterion_reduction_identity();
  criterion_power_scaling();
  criterion_strategy_ordering();
  criterion_outer_containment();
  criterion_classical_in_nodelay();
  criterion_noise_monotonicity();
  criterion_information_engine();
  criterion_capacity_consistency();
  criterion_kernel_units();
  std::printf("acceptance: %d failed, %d warned, total %.1f s\n", g_failures,
              g_warnings, seconds_since(t0));
  return g_failures;
}
