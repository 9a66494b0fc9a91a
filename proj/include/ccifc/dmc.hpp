#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccifc/region.hpp"
#include "ccifc/scenario.hpp"

namespace ccifc {

// ---------------------------------------------------------------------------
// Finite-alphabet channel p(y2,y3,y4 | x1,x2) and factored input families.
// ---------------------------------------------------------------------------

/// Transition law on finite alphabets.  `p` is row-major over
/// (x1, x2, y2, y3, y4): the y4 index varies fastest.  Alphabet sizes are
/// capped at 4 to keep exhaustive input enumeration tractable.
struct FiniteChannel {
  int nx1 = 2, nx2 = 2, ny2 = 2, ny3 = 2, ny4 = 2;
  std::vector<double> p;

  std::size_t index(int x1, int x2, int y2, int y3, int y4) const {
    return (((static_cast<std::size_t>(x1) * nx2 + x2) * ny2 + y2) * ny3 +
            y3) *
               ny4 +
           y4;
  }
  double at(int x1, int x2, int y2, int y3, int y4) const {
    return p[index(x1, x2, y2, y3, y4)];
  }
  /// Sizes in [1,4], entries nonnegative and finite, each (x1,x2) row
  /// summing to 1 within 1e-12.
  Validity validate() const;
};

/// Parses/serializes the canonical channel JSON: integer sizes nx1..ny4 and
/// the flat row-major array "p".  Throws std::invalid_argument on malformed
/// input (validate() is applied on parse).
FiniteChannel channel_from_json(const std::string& text);
std::string channel_to_json(const FiniteChannel& ch);

/// Built-in example channels:
///   "degraded-binary"  2-2-2-2-2, passes the degraded-capacity conditions
///   "paired-outputs"   2-2-2-2-4, y4 reveals both inputs
///   "noiseless-xor"    2-2-2-2-2, y3 = y4 = x1 xor x2
/// Returns an empty optional for unknown names.
std::optional<FiniteChannel> builtin_channel(const std::string& name);
std::vector<std::string> builtin_channel_names();

/// Factored input distribution p(t) p(x1|t) p(x2|t).
struct InputFamily {
  int nt = 1;
  std::vector<double> pt;           // [t]
  std::vector<double> px1_given_t;  // [t*nx1 + x1]
  std::vector<double> px2_given_t;  // [t*nx2 + x2]

  Validity validate(int nx1, int nx2) const;
};

// ---------------------------------------------------------------------------
// Dense joint distribution and information measures.
// ---------------------------------------------------------------------------

/// Axis bit flags for marginal/information queries on a JointPmf.
enum : unsigned {
  AxT = 1u << 0,
  AxX1 = 1u << 1,
  AxX2 = 1u << 2,
  AxY2 = 1u << 3,
  AxY3 = 1u << 4,
  AxY4 = 1u << 5,
};

/// Joint p(t, x1, x2, y2, y3, y4), row-major in that axis order.
struct JointPmf {
  std::array<int, 6> dims{};
  std::vector<double> p;
};

JointPmf joint_pmf(const FiniteChannel& ch, const InputFamily& fam);

/// Shannon entropy (bits) of the marginal over the axes set in `mask`
/// (0 log 0 = 0).  mask == 0 gives 0.
double marginal_entropy(const JointPmf& joint, unsigned axes);

/// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C), in bits.
double mutual_information(const JointPmf& joint, unsigned a, unsigned b,
                          unsigned c = 0);

// ---------------------------------------------------------------------------
// Channel-condition checks.
// ---------------------------------------------------------------------------

/// The capacity results below apply only under side conditions on the
/// channel.  Two are structural (checked exactly from the transition law);
/// the rest quantify over input distributions and are certified by sampling:
/// a negative worst margin is a counterexample, a nonnegative one means
/// "no counterexample found".
enum class ChannelCondition {
  DegradedRx1,          // p(y3|x1,x2,y2) = p(y3|x2,y2)          [structural]
  SemideterministicRx1, // y2 is a deterministic function of x1  [structural]
  StrongInterferenceRx1,   // I(X2;Y4|X1) <= I(X2;Y3|X1)
  StrongInterferenceRx2,   // I(X1;Y3)    <= I(X1;Y4)
  StrongSumInterference,   // I(X1,X2;Y3) <= I(X1,X2;Y4)
  StrongConditionalRx2,    // I(X1;Y3|Y2,X2) <= I(X1;Y4|Y2,X2)
};

std::string condition_name(ChannelCondition c);

struct ConditionReport {
  ChannelCondition condition;
  bool structural = false;
  bool holds = false;
  double worst_margin = 0.0;  ///< min slack seen; negative = violation
  std::uint64_t samples = 0;  ///< input families tried (0 for structural)
  std::string witness;        ///< description of the worst/violating case
};

/// Evaluates one condition (structural checks are exact; the others sample
/// `samples` random factored inputs plus all point-mass corners and the
/// uniform input, seeded deterministically).
ConditionReport check_condition(const FiniteChannel& ch, ChannelCondition c,
                                std::uint64_t seed = 1, int samples = 300);

/// All six conditions in declaration order.
std::vector<ConditionReport> check_conditions(const FiniteChannel& ch,
                                              std::uint64_t seed = 1,
                                              int samples = 300);

// ---------------------------------------------------------------------------
// Exhaustive capacity evaluation for the certified channel classes.
// ---------------------------------------------------------------------------

/// Which capacity characterization to evaluate, together with its
/// precondition set:
///   Degraded          — DegradedRx1 + StrongInterferenceRx1 + StrongInterferenceRx2
///   DegradedSum       — DegradedRx1 + StrongInterferenceRx1 + StrongSumInterference
///                       (sum rate capped by receiver 3 only)
///   Semideterministic — SemideterministicRx1 + StrongInterferenceRx1 +
///                       StrongInterferenceRx2 + StrongConditionalRx2
enum class CapacityTheorem { Degraded, DegradedSum, Semideterministic };

struct CapacityOptions {
  int t_max = 4;  ///< auxiliary alphabet sizes 1..t_max are all covered
  int q = 6;      ///< probability grid denominator (step 1/q)
  int max_threads = 0;
  std::uint64_t seed = 1;        ///< for the sampled precondition checks
  int condition_samples = 300;
  std::uint64_t family_cap = 200000000;  ///< refuse larger enumerations
};

struct CapacityResult {
  Frontier frontier;
  std::uint64_t families = 0;  ///< input families enumerated
  std::vector<ConditionReport> preconditions;
  bool refused = false;
  std::string refusal;  ///< names the failing condition when refused
};

/// Checks the preconditions for `theorem`; on success enumerates every
/// factored input family on the probability grid (auxiliary alphabet up to
/// t_max) and returns the convex closure of the per-family rate polygons
///   R1 <= r1,  R2 <= r2,  R1 + R2 <= s.
/// On a failed precondition, returns refused=true without enumerating.
/// Throws std::invalid_argument if the enumeration would exceed family_cap
/// or the channel/options are malformed.
CapacityResult capacity_region(const FiniteChannel& ch, CapacityTheorem theorem,
                               const CapacityOptions& options = {});

/// Convenience wrappers for the three characterizations.
CapacityResult capacity_degraded(const FiniteChannel& ch,
                                 const CapacityOptions& options = {});
CapacityResult capacity_degraded_cor(const FiniteChannel& ch,
                                     const CapacityOptions& options = {});
CapacityResult capacity_semidet(const FiniteChannel& ch,
                                const CapacityOptions& options = {});

/// Per-family constraint values for the Degraded characterization:
///   r1 = I(X1;Y2|X2,T)   r2 = I(X2;Y4|X1,T)
///   s3 = I(X1,X2;Y3)     s4 = I(X1,X2;Y4)
/// computed directly on the joint tensor.
struct FamilyValues {
  double r1 = 0, r2 = 0, s3 = 0, s4 = 0;
};

FamilyValues degraded_family_values(const FiniteChannel& ch,
                                    const InputFamily& fam);

/// The same four constraints evaluated through the general split-rate term
/// assignment (auxiliaries collapsed onto T, X2, X1).  The sum terms become
/// I(X2,X1,T;Y3) and I(X1,X2,T;Y4): equal to s3/s4 only because T-(X1,X2)-Y
/// is a Markov chain, which makes the agreement a nontrivial identity.
FamilyValues assigned_inner_bound_values(const FiniteChannel& ch,
                                         const InputFamily& fam);

/// Worst absolute disagreement between the production fast evaluation path
/// and assigned_inner_bound_values over the full enumeration grid of
/// capacity_region (multithreaded).  Used by the consistency check.
struct AssignmentCheck {
  double max_gap = 0.0;
  std::uint64_t families = 0;
};

AssignmentCheck verify_assignment_identity(const FiniteChannel& ch,
                                           const CapacityOptions& options = {});

}  // namespace ccifc
