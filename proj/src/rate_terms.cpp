#include "ccifc/rate_terms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ccifc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(double value, int term_index) {
  std::ostringstream os;
  os << "negative theta argument " << value << " in term " << term_index;
  return os.str();
}
}  // namespace

NegativeThetaArgument::NegativeThetaArgument(double value, int term_index)
    : std::domain_error(describe(value, term_index)),
      value_(value),
      term_index_(term_index) {}

double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return num > 0.0 ? kInf : -kInf;
  return num / den;
}

double theta(double x, int term_index) {
  if (x == kInf) return kInf;
  if (x < 0.0) throw NegativeThetaArgument(x, term_index);
  return 0.5 * std::log2(1.0 + x);
}

std::string DpcSelection::label() const {
  switch (kind) {
    case Kind::Auto: return "auto(paper+zero)";
    case Kind::PaperFormula: return "paper";
    case Kind::Zero: return "zero";
    case Kind::Manual: {
      std::ostringstream os;
      os << "manual:" << a1 << "," << a2;
      return os.str();
    }
  }
  return "?";
}

DpcCoefficients dpc_coefficients(const GaussianScenario& s, const PowerAllocation& a) {
  const double D = s.N4 + s.h41 * s.h41 * (a.bp1 + a.b1 + a.bp2 + a.b2) * s.P1 +
                   s.h42 * s.h42 * a.g2 * s.P2;
  const double q_root = s.h41 * std::sqrt(a.b4 * s.P1) + s.h42 * std::sqrt(a.g3 * s.P2);
  const double q = q_root * q_root;
  DpcCoefficients c;
  c.a1 = s.h42 * a.g1 * s.P2 / (s.h42 * s.h42 * a.g1 * s.P2 + D + q);
  c.a2 = s.h42 * a.g2 * s.P2 / (D + q);
  return c;
}

DpcCoefficients resolve_dpc(const DpcSelection& sel, const GaussianScenario& s,
                            const PowerAllocation& a) {
  switch (sel.kind) {
    case DpcSelection::Kind::PaperFormula: return dpc_coefficients(s, a);
    case DpcSelection::Kind::Zero: return {0.0, 0.0};
    case DpcSelection::Kind::Manual: return {sel.a1, sel.a2};
    case DpcSelection::Kind::Auto: break;
  }
  throw std::logic_error("Auto coefficient selection denotes a branch union; "
                         "resolve PaperFormula and Zero separately");
}

Intermediates intermediates(const GaussianScenario& s, const PowerAllocation& al,
                            const DpcCoefficients& dpc) {
  const double P1 = s.P1, P2 = s.P2;
  const double h41 = s.h41, h42 = s.h42;
  const double a1 = dpc.a1, a2 = dpc.a2;

  Intermediates m;
  m.A = al.g1 * P2 + a1 * a1 * h41 * h41 * al.b3 * P1;
  m.B = a2 * a2 * h41 * h41 * al.b3 * P1 + (al.g2 + h42 * h42 * a2 * a2 * al.g1) * P2;
  const double one_a1 = 1.0 - a1 * h42;
  m.C = h41 * h41 * al.b3 * al.g1 * P1 * P2 * one_a1 * one_a1;
  m.D = s.N4 + h41 * h41 * (al.bp1 + al.b1 + al.bp2 + al.b2) * P1 +
        h42 * h42 * al.g2 * P2;
  // Literal three-line sum; not algebraically simplified.
  m.F = (h41 * h41 * al.b3 * a1 * P1 + 2.0 * h42 * al.g1 * P2) *
            (h41 * h41 * al.b3 * a1 * al.g2 * P1 * P2) +
        m.C * a2 *
            (a2 * h42 * h42 * al.g1 * P2 + a2 * h41 * h41 * al.b3 * P1 +
             2.0 * h42 * al.g2 * P2) +
        (m.A * al.g2 + al.g1 * al.g1 * P2) * h42 * h42 * al.g2 * P2 * P2;
  return m;
}

RateTerms terms_classical(const GaussianScenario& s, const PowerAllocation& al,
                          const DpcCoefficients& dpc) {
  const double P1 = s.P1, P2 = s.P2;
  const double h21 = s.h21, h31 = s.h31, h32 = s.h32, h41 = s.h41, h42 = s.h42;
  const double N2 = s.N2, N3 = s.N3, N4 = s.N4;
  const double bp1 = al.bp1, b1 = al.b1, bp2 = al.bp2, b2 = al.b2, b3 = al.b3,
               b4 = al.b4;
  const double g1 = al.g1, g2 = al.g2, g3 = al.g3;
  const double a1 = dpc.a1, a2 = dpc.a2;

  const Intermediates m = intermediates(s, al, dpc);
  const double A = m.A, B = m.B, C = m.C, F = m.F;

  RateTerms t;
  t.I[1] = theta(safe_ratio(a1 * a1 * h41 * h41 * b3 * P1, g1 * P2), 1);
  t.I[2] = theta(
      safe_ratio(a2 * a2 * h41 * h41 * b3 * P1, (g2 + a2 * a2 * h42 * h42 * g1) * P2),
      2);

  // Several arguments below are ratios whose numerator and denominator both
  // vanish when an auxiliary codeword carries zero power (A == 0 means the
  // common cognitive auxiliary is degenerate, B == 0 the private one).  Each
  // such ratio is continued with the exact limiting form so that boundary
  // allocations evaluate to the true rate instead of 0/0 -> 0.
  const double one_a1 = 1.0 - a1 * h42;
  const double mid3 =
      A > 0.0 ? theta(safe_ratio(a2 * a2 * h41 * h41 * b3 * one_a1 * one_a1 *
                                     g1 * P1 * P2,
                                 A * g2 * P2),
                      3)
              : theta(safe_ratio(a2 * a2 * h41 * h41 * b3 * P1, g2 * P2), 3);
  const double root3 = a1 * h41 * h41 * b3 * P1 + h42 * g1 * P2;
  t.I3prime =
      theta(safe_ratio(a2 * a2 * root3 * root3, A * g2 * P2 + C * a2 * a2), 3);
  t.I[3] = t.I[1] + mid3 + t.I3prime;

  const double den3 = h32 * h32 * g2 * P2 + N3;
  t.I[4] = theta(safe_ratio(h31 * h31 * bp1 * P1, den3), 4);

  // Active-power sum: the display form writes the bare full power P1 here;
  // the fraction-weighted sum is identical on the full-power boundary and is
  // required for the exact power-rescaling identity off it.
  const double beta_sum = bp1 + b1 + bp2 + b2 + b3 + b4;
  t.I[5] = t.I[1] + theta(safe_ratio(h31 * h31 * beta_sum * P1 +
                                         h32 * h32 * (g1 + g3) * P2 +
                                         2.0 * h31 * h32 * std::sqrt(b4 * g3 * P1 * P2),
                                     den3),
                          5);

  // The joint bound on the streams resolved at receiver 3 together with the
  // common cognitive auxiliary: a chain-rule sum in which the auxiliary's
  // contribution is the (h31 - a1*h41*h32)^2 square, so the argument can
  // never be negative.
  const double cross67 = h31 - a1 * h41 * h32;
  const auto ratio67 = [&](double bsum) {
    if (A == 0.0)
      return safe_ratio(h31 * h31 * (bsum + b3) * P1, den3);
    return P1 *
           safe_ratio(A * h31 * h31 * bsum + g1 * P2 * b3 * cross67 * cross67,
                      A * den3);
  };
  t.I[6] = t.I[1] + theta(ratio67(bp1 + b1 + bp2), 6);
  t.I[7] = t.I[1] + theta(ratio67(bp1 + bp2), 7);

  t.I[8] = t.I[1] +
           theta(safe_ratio(h31 * h31 * (bp1 + bp2 + b3) * P1 + h32 * h32 * g1 * P2,
                            den3),
                 8);
  t.I[9] = theta(safe_ratio(h31 * h31 * (bp1 + b1) * P1, den3), 9);
  t.I[10] = t.I[1] +
            theta(safe_ratio(h31 * h31 * bp1 * P1 + h32 * h32 * g1 * P2, den3), 10);
  t.I[11] =
      t.I[1] + theta(safe_ratio(h31 * h31 * (bp1 + b1 + bp2 + b3) * P1 +
                                    h32 * h32 * g1 * P2,
                                den3),
                     11);
  t.I[12] = t.I[1] +
            theta(safe_ratio(h31 * h31 * (bp1 + b1) * P1 + h32 * h32 * g1 * P2, den3),
                  12);

  // Receiver-4 side.  All bounds are log-determinant ratios over the three
  // signals (common auxiliary, private auxiliary, fresh direct stream) plus
  // the effective noise n4 that lumps the two receiver-4-invisible streams.
  const double AC = A * g2 * P2 + C * a2 * a2;
  const double one_a2 = 1.0 - a2 * h42;
  const double n4 = N4 + h41 * h41 * (bp1 + bp2) * P1;
  const double DEN = n4 * AC + C * one_a2 * one_a2 * g2 * P2;
  // Signal variances / covariances with the relevant auxiliary once the other
  // cognitive codeword is absent (used by the degenerate branches).
  const double vy13 = h41 * h41 * b3 * P1 + h42 * h42 * g1 * P2 + n4;
  const double vy14 = h41 * h41 * b3 * P1 + h42 * h42 * g2 * P2 + n4;
  const double rho14 = a2 * h41 * h41 * b3 * P1 + h42 * g2 * P2;
  // Cauchy-Schwarz guarantees these are >= (auxiliary variance) * n4; clamp
  // roundoff so a near-degenerate manual coefficient cannot flip the sign.
  const double gap13 = std::max(A * vy13 - root3 * root3, 0.0);
  const double gap14 = std::max(B * vy14 - rho14 * rho14, 0.0);

  if (A == 0.0) {
    t.I[13] = 0.0;
    t.I[14] = B == 0.0 ? 0.0 : theta(safe_ratio(rho14 * rho14, gap14), 14);
  } else if (B == 0.0) {
    t.I[13] = theta(safe_ratio(root3 * root3, gap13), 13);
    t.I[14] = 0.0;
  } else {
    const double num13 = g2 * P2 * one_a2 * root3;
    t.I[13] = t.I3prime + theta(safe_ratio(num13 * num13, B * DEN), 13);
    const double num14 = a2 * C + h42 * g2 * P2 * A;
    t.I[14] = t.I3prime + theta(safe_ratio(num14 * num14, A * DEN), 14);
  }

  const double inc16 =
      B == 0.0
          ? theta(safe_ratio(h41 * h41 * b1 * P1, vy13), 16)
          : theta(safe_ratio(h41 * h41 * b1 * P1 * B,
                             B * n4 + g2 * P2 * one_a2 * one_a2 *
                                          (h41 * h41 * b3 * P1 +
                                           h42 * h42 * g1 * P2)),
                  16);
  const double inc17 =
      A == 0.0
          ? theta(safe_ratio(h41 * h41 * b1 * P1, vy14), 17)
          : theta(safe_ratio(h41 * h41 * b1 * P1 * A,
                             A * (n4 + h42 * h42 * g2 * P2) + C),
                  17);
  t.I[16] = t.I[13] + inc16;
  t.I[17] = t.I[14] + inc17;

  const double d16 = h41 * h41 * b1 * P1;  // direct-stream power seen at Rx4
  if (A == 0.0 && B == 0.0) {
    t.I[18] = theta(safe_ratio(d16, h41 * h41 * b3 * P1 + n4), 18);
    t.I[19] = 0.0;
  } else if (A == 0.0) {
    t.I[18] = theta(safe_ratio(d16 * B + rho14 * rho14, gap14), 18);
    t.I[19] = theta(safe_ratio(rho14 * rho14, gap14), 19);
  } else if (B == 0.0) {
    t.I[18] = theta(safe_ratio(d16 * A + root3 * root3, gap13), 18);
    t.I[19] = theta(safe_ratio(root3 * root3, gap13), 19);
  } else {
    t.I[18] = theta(safe_ratio(d16 * AC + F, DEN), 18);
    t.I[19] = theta(safe_ratio(F, DEN), 19);
  }

  // Everything the cognitive side can help reveal at Rx4, decomposed as the
  // resolvable direct part plus the cognitive pair bound; both pieces stay
  // finite and well defined on every power boundary.
  const double vq15 = h41 * h41 * (b3 + bp1 + bp2) * P1 +
                      h42 * h42 * (g1 + g2) * P2 + N4;
  t.I[15] = theta(safe_ratio((b1 + b2 + b4) * h41 * h41 * P1 +
                                 h42 * h42 * g3 * P2 +
                                 2.0 * h41 * h42 * std::sqrt(b4 * g3 * P1 * P2),
                             vq15),
                  15) +
            t.I[19];

  const double den2 = h21 * h21 * (bp1 + b1) * P1 + N2;
  t.I[20] = theta(safe_ratio(h21 * h21 * bp2 * P1, den2), 20);
  t.I[21] = theta(safe_ratio(h21 * h21 * (bp2 + b2) * P1, den2), 21);

  t.provenance = Strategy::Classical;
  return t;
}

GaussianScenario no_delay_scenario(const GaussianScenario& s, double relay_beta,
                                   double relay_h) {
  GaussianScenario t = s;
  const double hb = relay_h * relay_beta;
  t.h31 = s.h31 + hb * s.h21 * s.h32;
  t.h32 = relay_h * (1.0 - relay_beta) * s.h32;
  t.N3 = s.N3 + hb * hb * s.h32 * s.h32 * s.N2;
  t.h41 = s.h41 + hb * s.h21 * s.h42;
  t.h42 = relay_h * (1.0 - relay_beta) * s.h42;
  t.N4 = s.N4 + hb * hb * s.h42 * s.h42 * s.N2;
  return t;
}

RateTerms terms_no_delay(const GaussianScenario& s, const PowerAllocation& al,
                         const DpcCoefficients& dpc) {
  const GaussianScenario sub = no_delay_scenario(s, al.relay_beta, al.relay_h);
  RateTerms t = terms_classical(sub, al, dpc);
  t.provenance = Strategy::NoDelay;
  return t;
}

RateTerms terms_lookahead(const GaussianScenario& s, const PowerAllocation& al,
                          const DpcCoefficients& dpc) {
  RateTerms t = terms_classical(s, al, dpc);
  const double den2 = s.h21 * s.h21 * (al.bp1 + al.b1) * s.P1 + s.N2;
  t.I[20] = theta(safe_ratio(s.h21 * s.h21 * al.b3 * s.P1, den2), 20);
  t.I[21] = theta(safe_ratio(s.h21 * s.h21 * (al.b3 + al.b4) * s.P1, den2), 21);
  t.provenance = Strategy::Lookahead;
  return t;
}

RateTerms evaluate_terms(const GaussianScenario& s, const PowerAllocation& al,
                         const DpcCoefficients& dpc) {
  switch (al.strategy) {
    case Strategy::Classical: return terms_classical(s, al, dpc);
    case Strategy::NoDelay: return terms_no_delay(s, al, dpc);
    case Strategy::Lookahead: return terms_lookahead(s, al, dpc);
  }
  throw std::logic_error("unreachable strategy");
}

}  // namespace ccifc
