#pragma once
// Closed-form rate terms for the three cooperation strategies.
//
// Every rate passes through the kernel theta(x) = 0.5*log2(1+x) (bits per
// channel use).  +inf is a first-class rate value: it arises on noiseless
// boundaries and means the corresponding decoding constraint is inactive.
//
// Sub-expression ratios are evaluated with a fixed boundary convention
// (safe_ratio): a vanishing numerator yields 0 even when the denominator is
// also 0, and a positive numerator over 0 yields +inf.  This makes the term
// table total on the boundary of the power simplex (silent streams contribute
// zero rate instead of NaN).

#include <array>
#include <stdexcept>

#include "ccifc/scenario.hpp"

namespace ccifc {

// Thrown when a theta argument is negative: the parameter point does not
// correspond to a realizable rate and must be skipped by sweeps, never
// clamped.  Carries the 1-based index of the offending term (0 = unknown).
class NegativeThetaArgument : public std::domain_error {
 public:
  NegativeThetaArgument(double value, int term_index);
  double value() const { return value_; }
  int term_index() const { return term_index_; }

 private:
  double value_;
  int term_index_;
};

// 0/0 -> 0;  pos/0 -> +inf;  neg/0 -> -inf;  otherwise num/den.
double safe_ratio(double num, double den);

// 0.5*log2(1+x).  theta(0)=0, theta(1)=0.5, theta(3)=1, theta(+inf)=+inf.
// Negative x throws NegativeThetaArgument(term_index).
double theta(double x, int term_index = 0);

// ---------------------------------------------------------------------------
// Interference precoding (dirty-paper) coefficients.
// ---------------------------------------------------------------------------
struct DpcCoefficients {
  double a1 = 0, a2 = 0;
};

// How the precoding coefficients are chosen for a sweep.
//   Auto        — evaluate each allocation under both the closed-form choice
//                 and zero coefficients and take the union.  Any fixed
//                 coefficient pair is an achievable scheme, so the union is
//                 achievable; the zero branch has no formula domain holes,
//                 which keeps the swept region a superset of the
//                 rate-splitting-only baseline.  This is the CLI default.
//   PaperFormula— the closed-form heuristic only (dpc_coefficients below).
//   Zero        — a1 = a2 = 0 (no precoding).
//   Manual      — caller-supplied pair.
struct DpcSelection {
  enum class Kind { Auto, PaperFormula, Zero, Manual };
  Kind kind = Kind::Auto;
  double a1 = 0, a2 = 0;  // used by Manual

  static DpcSelection auto_union() { return {Kind::Auto, 0, 0}; }
  static DpcSelection paper() { return {Kind::PaperFormula, 0, 0}; }
  static DpcSelection zero() { return {Kind::Zero, 0, 0}; }
  static DpcSelection manual(double a1, double a2) { return {Kind::Manual, a1, a2}; }
  std::string label() const;
};

// Closed-form coefficient choice (a Costa-style heuristic):
//   a1 = h42*g1*P2 / (h42^2*g1*P2 + D + q)
//   a2 = h42*g2*P2 / (D + q)
// with D = N4 + h41^2*(bp1+b1+bp2+b2)*P1 + h42^2*g2*P2 and
// q = (h41*sqrt(b4*P1) + h42*sqrt(g3*P2))^2.  Denominators are >= N4 > 0.
DpcCoefficients dpc_coefficients(const GaussianScenario& scen,
                                 const PowerAllocation& alloc);

// Auxiliary power-like quantities shared by several terms.  F is evaluated as
// the literal three-line sum, without algebraic simplification.
struct Intermediates {
  double A = 0, B = 0, C = 0, D = 0, F = 0;
};

Intermediates intermediates(const GaussianScenario& scen, const PowerAllocation& alloc,
                            const DpcCoefficients& dpc);

// ---------------------------------------------------------------------------
// The 21-term rate vector.
// ---------------------------------------------------------------------------
struct RateTerms {
  std::array<double, 22> I{};  // I[1..21]; I[0] unused
  double I3prime = 0;          // final theta component of I[3]; reused in I13/I14
  Strategy provenance = Strategy::Classical;
};

// Classical strategy term table.  Throws NegativeThetaArgument if any theta
// argument is negative (possible for manual coefficients, and for one term of
// the closed-form choice; sweeps treat the point as infeasible).
//
// The I5 signal power uses the active transmitter-1 fraction sum
// (bp1+b1+bp2+b2+b3+b4)*P1.  On the full-power boundary this equals the bare
// P1 of the display form; off the boundary, the fraction-weighted form is the
// one that keeps the power-rescaling identity exact and matches the variance
// of the transmitted signal.
RateTerms terms_classical(const GaussianScenario& scen, const PowerAllocation& alloc,
                          const DpcCoefficients& dpc);

// Instantaneous-relaying strategy: the classical table evaluated on a
// substituted scenario where, for receivers u in {3,4},
//   hu1' = hu1 + relay_h*relay_beta*h21*hu2
//   hu2' = relay_h*(1-relay_beta)*hu2
//   Nu'  = Nu + relay_h^2*relay_beta^2*hu2^2*N2
// while h21 and N2 (terms I20/I21) are untouched.  The precoding closed form,
// when selected, is evaluated on the substituted scenario.
// Requires alloc.strategy == NoDelay and a Valid allocation.
RateTerms terms_no_delay(const GaussianScenario& scen, const PowerAllocation& alloc,
                         const DpcCoefficients& dpc);

// Substituted scenario used by terms_no_delay (exposed for tests and for
// coefficient evaluation).
GaussianScenario no_delay_scenario(const GaussianScenario& scen, double relay_beta,
                                   double relay_h);

// Non-causal pre-decoding strategy: I1..I19 from the classical table with
// bp2 = b2 = 0 enforced, and the cognitive decoding terms replaced by
//   I20 = theta(h21^2*b3*P1 / (h21^2*(bp1+b1)*P1 + N2))
//   I21 = theta(h21^2*(b3+b4)*P1 / (h21^2*(bp1+b1)*P1 + N2))
// Requires alloc.strategy == Lookahead and a Valid allocation.
RateTerms terms_lookahead(const GaussianScenario& scen, const PowerAllocation& alloc,
                          const DpcCoefficients& dpc);

// Convenience dispatcher: evaluates the table matching alloc.strategy.
RateTerms evaluate_terms(const GaussianScenario& scen, const PowerAllocation& alloc,
                         const DpcCoefficients& dpc);

// Resolves a DpcSelection to a concrete coefficient pair for one allocation.
// Auto is not resolvable here (it denotes a union of two branches); callers
// sweep both resolve(PaperFormula) and resolve(Zero) instead.
DpcCoefficients resolve_dpc(const DpcSelection& sel, const GaussianScenario& scen,
                            const PowerAllocation& alloc);

}  // namespace ccifc
