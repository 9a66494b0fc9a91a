#pragma once
// Channel scenarios and transmit power allocations for the two-transmitter,
// three-receiver Gaussian cooperative interference setup:
//
//   Y2 = h21*X1                 + Z2     (cognitive transmitter's overheard signal)
//   Y3 = h31*X1 + h32*X2        + Z3     (receiver of transmitter 1)
//   Y4 = h41*X1 + h42*X2        + Z4     (receiver of transmitter 2)
//
// with E[X1^2] <= P1, E[X2^2] <= P2 and Zu ~ N(0, Nu).
//
// Transmitter 1 splits its power over six streams (fractions bp1,b1,bp2,b2,b3,b4)
// and transmitter 2 over three (g1,g2,g3).  Fractions are stored directly, not
// absolute powers, so rescaling (P1,P2) -> (c*P1,c*P2) with fractions/c leaves
// every rate term bit-identical.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ccifc {

// Cooperation mode of the cognitive transmitter.
//   Classical  — it only uses strictly past overheard symbols.
//   NoDelay    — it may additionally relay its current received symbol through
//                a memoryless amplify-and-forward map (parameters relay_beta, relay_h).
//   Lookahead  — it pre-decodes cooperative content non-causally; the streams
//                bp2/b2 are unavailable (must be zero).
enum class Strategy { Classical, NoDelay, Lookahead };

std::string strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

struct GaussianScenario {
  double P1 = 0, P2 = 0;
  double h21 = 0, h31 = 0, h32 = 0, h41 = 0, h42 = 0;
  double N2 = 0, N3 = 0, N4 = 0;
};

// Power-split fractions.  Transmitter 1:
//   bp1 — private stream, pre-decoded by the cognitive transmitter
//   b1  — common stream, pre-decoded by the cognitive transmitter
//   bp2 — private stream sent without cognitive help
//   b2  — common stream sent without cognitive help
//   b3  — stale cooperative resolution information (binned against at Tx2)
//   b4  — fresh cooperative stream transmitted coherently with Tx2's g3 stream
// Transmitter 2:
//   g1  — binning/precoding carrier power
//   g2  — own private stream
//   g3  — cooperative relay stream (coherent with b4)
// NoDelay only:
//   relay_beta in [0,1] — share of the instantaneous relay map given to the
//                         overheard symbol (1-relay_beta weights the codeword)
//   relay_h    > 0      — relay map output gain
struct PowerAllocation {
  Strategy strategy = Strategy::Classical;
  double bp1 = 0, b1 = 0, bp2 = 0, b2 = 0, b3 = 0, b4 = 0;
  double g1 = 0, g2 = 0, g3 = 0;
  double relay_beta = 0;
  double relay_h = 1;

  double beta_sum() const { return bp1 + b1 + bp2 + b2 + b3 + b4; }
  double gamma_sum() const { return g1 + g2 + g3; }
};

struct Validity {
  bool valid = true;
  std::string violation;  // first violated constraint, empty when valid
};

// Total transmit power of the cognitive transmitter's instantaneous relay map
// before the output gain is applied; the NoDelay feasibility constraint is
// relay_h^2 * relay_power_demand <= P2.
double relay_power_demand(const GaussianScenario& scen, const PowerAllocation& alloc,
                          double relay_beta);

// Verdict-returning validation (total: never throws on finite inputs).
// Checks fraction ranges, the two simplex sums, the Lookahead stream
// restriction, and the NoDelay relay power budget.
Validity validate_allocation(const PowerAllocation& alloc, const GaussianScenario& scen);

// Scenario validation for loaded files: finite fields, P >= 0, N3,N4 > 0,
// N2 >= 0 (a noiseless overheard link is admitted; evaluators return +inf for
// the decoding terms it unbounds).
Validity validate_scenario(const GaussianScenario& scen);

// ---------------------------------------------------------------------------
// Named parameter presets matching the published comparison plots.
// ---------------------------------------------------------------------------
struct FigurePreset {
  std::string name;
  GaussianScenario scenario;       // h21/N2 at their default values
  std::vector<double> h21_values;  // cognitive-link gains shown by this figure
  std::vector<double> n2_values;   // overheard-noise sweep (empty if none)
};

// Valid names: fig6, fig7, fig8, fig9strong, fig9mixed, fig10.
std::optional<FigurePreset> figure_preset(const std::string& name);
std::vector<std::string> preset_names();

// ---------------------------------------------------------------------------
// JSON serialization.  Scenario files are flat objects with keys
// {"P1","P2","h21","h31","h32","h41","h42","N2","N3","N4"}; all finite numbers.
// ---------------------------------------------------------------------------
std::string scenario_to_json(const GaussianScenario& scen);
// Returns nullopt (with *error set) on malformed input.
std::optional<GaussianScenario> scenario_from_json(const std::string& text,
                                                   std::string* error = nullptr);

// ---------------------------------------------------------------------------
// Allocation masks: pin named fractions to fixed values (used for the ablation
// curves and as the restriction defining the rate-splitting-only baseline).
// Valid keys: bp1 b1 bp2 b2 b3 b4 g1 g2 g3 relay_beta.
// ---------------------------------------------------------------------------
using MaskSet = std::map<std::string, double>;

// Applies masks in place; returns false if a key is unknown.
bool apply_masks(PowerAllocation& alloc, const MaskSet& masks, std::string* error = nullptr);
bool is_valid_mask_key(const std::string& key);

}  // namespace ccifc
