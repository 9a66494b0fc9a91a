#include "ccifc/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "ccifc/rate_terms.hpp"

namespace ccifc {

SweepResult hk_region(const GaussianScenario& scenario,
                      const SweepOptions& options) {
  SweepOptions opt = options;
  opt.dpc = DpcSelection::zero();
  opt.masks["bp2"] = 0.0;
  opt.masks["b2"] = 0.0;
  opt.masks["b3"] = 0.0;
  opt.masks["b4"] = 0.0;
  opt.masks["g3"] = 0.0;
  opt.masks.erase("relay_beta");
  return sweep_frontier(scenario, Strategy::Classical, opt);
}

double interference_free_cap(const GaussianScenario& s, bool with_gain) {
  const double gain = with_gain ? s.h42 * s.h42 : 1.0;
  return theta(safe_ratio(gain * s.P2, s.N4));
}

namespace {

// Symmetric 2x2 covariance from (total power, antenna fraction, correlation).
struct Cov2 {
  double p11, p12, p22;
};

Cov2 covariance(double p, double f, double rho) {
  const double p1 = p * f;
  const double p2 = p * (1.0 - f);
  return {p1, rho * std::sqrt(p1 * p2), p2};
}

double quad(const Cov2& c, double h1, double h2) {
  return h1 * h1 * c.p11 + 2.0 * h1 * h2 * c.p12 + h2 * h2 * c.p22;
}

// Intersection of a convex frontier with the half-plane r2 <= cap.
Frontier clip_max_r2(const Frontier& f, double cap) {
  if (f.empty() || cap >= f.max_r2()) return f;
  Frontier out;
  if (cap <= 0.0) {
    out.points.push_back({f.max_r1(), 0.0});
    return out;
  }
  // Walk the chain to the crossing point; everything left of it flattens to
  // the cap (the horizontal run is implied by the leading chain point).
  for (size_t i = 0; i + 1 <= f.points.size(); ++i) {
    const RatePoint& p = f.points[i];
    if (p.r2 > cap) continue;
    if (out.points.empty() && i > 0) {
      const RatePoint& q = f.points[i - 1];  // q.r2 > cap >= p.r2
      const double span = q.r2 - p.r2;
      const double t = span > 0.0 ? (q.r2 - cap) / span : 0.0;
      const double x = q.r1 + t * (p.r1 - q.r1);
      if (std::abs(p.r2 - cap) > 1e-15 || std::abs(p.r1 - x) > 1e-15)
        out.points.push_back({x, cap});
    }
    out.points.push_back(p);
  }
  if (out.points.empty()) out.points.push_back({f.max_r1(), cap});
  return out;
}

}  // namespace

Frontier mimo_bc_outer(const GaussianScenario& s, const OuterOptions& opt) {
  if (const auto v = validate_scenario(s); !v.valid)
    throw std::invalid_argument("invalid scenario: " + v.violation);
  if (opt.split_resolution < 2 || opt.rho_resolution < 2)
    throw std::invalid_argument("outer-bound resolutions must be at least 2");

  const double ptot = s.P1 + s.P2;
  const double a1 = s.h31 / std::sqrt(s.N3), a2 = s.h32 / std::sqrt(s.N3);
  const double b1 = s.h41 / std::sqrt(s.N4), b2 = s.h42 / std::sqrt(s.N4);

  const int ks = opt.split_resolution - 1;
  const int kr = opt.rho_resolution - 1;

  std::vector<RatePoint> pts;
  pts.reserve(static_cast<size_t>(ks + 1) * (ks + 1) * (kr + 1) * 2);

  for (int i = 0; i <= ks; ++i) {
    const double pa = ptot * i / ks;
    const double pb = ptot - pa;
    for (int ia = 0; ia <= ks; ++ia) {
      const double fa = static_cast<double>(ia) / ks;
      for (int ja = 0; ja <= kr; ++ja) {
        const double ra = -1.0 + 2.0 * ja / kr;
        const Cov2 A = covariance(pa, fa, ra);
        for (int ib = 0; ib <= ks; ++ib) {
          const double fb = static_cast<double>(ib) / ks;
          for (int jb = 0; jb <= kr; ++jb) {
            const double rb = -1.0 + 2.0 * jb / kr;
            const Cov2 B = covariance(pb, fb, rb);
            const double qa_ab = quad(A, a1, a2) + quad(B, a1, a2);
            const double qa_b = quad(B, a1, a2);
            const double qb_ab = quad(A, b1, b2) + quad(B, b1, b2);
            const double qb_a = quad(A, b1, b2);
            const double qb_b = quad(B, b1, b2);
            const double qa_a = quad(A, a1, a2);
            // First-encoded user sees the other's covariance as noise; the
            // later-encoded user gets a clean channel.
            pts.push_back(
                {0.5 * std::log2((1.0 + qa_ab) / (1.0 + qa_b)),
                 0.5 * std::log2(1.0 + qb_b)});
            pts.push_back(
                {0.5 * std::log2(1.0 + qa_a),
                 0.5 * std::log2((1.0 + qb_ab) / (1.0 + qb_a))});
          }
        }
      }
    }
  }

  const Frontier hull = convex_closure(std::move(pts));
  return clip_max_r2(hull, interference_free_cap(s, opt.cap_with_gain));
}

}  // namespace ccifc
