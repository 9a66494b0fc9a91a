#pragma once

#include "ccifc/region.hpp"
#include "ccifc/scenario.hpp"

namespace ccifc {

/// Rate-splitting-only reference region: the Classical sweep restricted to
/// superposition coding alone.  The relayed and bin-indexed streams are
/// masked to zero (bp2 = b2 = b3 = b4 = 0, g3 = 0) and interference
/// precoding is disabled.  Caller-supplied masks for other keys are honoured;
/// the restriction masks and the zero-coefficient selection always win.
SweepResult hk_region(const GaussianScenario& scenario,
                      const SweepOptions& options = {});

/// Largest rate of the second pair if the first transmitter were silent:
/// theta(P2/N4), or theta(h42^2*P2/N4) when `with_gain` is set.  The plain
/// variant matches the published comparison curves, which quote the cap for
/// a unit-gain direct link.
double interference_free_cap(const GaussianScenario& scenario,
                             bool with_gain = false);

struct OuterOptions {
  int split_resolution = 13;  ///< grid points for power and antenna splits
  int rho_resolution = 21;    ///< grid points for each antenna correlation
  bool cap_with_gain = false; ///< use the gain-weighted single-user cap
};

/// Outer bound on the two-user region: both transmitters are merged into one
/// two-antenna encoder with total power P1+P2 (full cooperation, sum-power
/// relaxation), giving a two-receiver broadcast region computed over a grid
/// of per-user covariance splits with both encoding orders; the result is
/// intersected with the single-user cap on R2.  Every relaxation step only
/// enlarges the region, so the true region for any cooperation strategy lies
/// inside.
Frontier mimo_bc_outer(const GaussianScenario& scenario,
                       const OuterOptions& options = {});

/// Column value used when exporting outer-bound frontiers.
inline constexpr const char* kOuterBoundType = "outer_sum_power_relaxation";

}  // namespace ccifc
