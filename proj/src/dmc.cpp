#include "ccifc/dmc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace ccifc {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kStructuralTol = 1e-12;
constexpr double kMiConditionTol = 1e-10;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) h -= xlog2x(v);
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Channel and input-family plumbing.
// ---------------------------------------------------------------------------

Validity FiniteChannel::validate() const {
  const auto bad = [](const std::string& why) { return Validity{false, why}; };
  for (int n : {nx1, nx2, ny2, ny3, ny4})
    if (n < 1 || n > 4) return bad("alphabet sizes must lie in [1,4]");
  const std::size_t want = static_cast<std::size_t>(nx1) * nx2 * ny2 * ny3 * ny4;
  if (p.size() != want)
    return bad("transition array has " + std::to_string(p.size()) +
               " entries, expected " + std::to_string(want));
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0)
      return bad("transition probabilities must be finite and nonnegative");
  }
  for (int x1 = 0; x1 < nx1; ++x1) {
    for (int x2 = 0; x2 < nx2; ++x2) {
      double sum = 0.0;
      for (int y2 = 0; y2 < ny2; ++y2)
        for (int y3 = 0; y3 < ny3; ++y3)
          for (int y4 = 0; y4 < ny4; ++y4) sum += at(x1, x2, y2, y3, y4);
      if (std::abs(sum - 1.0) > kRowSumTol)
        return bad("row (x1=" + std::to_string(x1) +
                   ",x2=" + std::to_string(x2) + ") sums to " +
                   std::to_string(sum));
    }
  }
  return {};
}

FiniteChannel channel_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("channel JSON parse error: ") +
                                e.what());
  }
  FiniteChannel ch;
  try {
    ch.nx1 = j.at("nx1").get<int>();
    ch.nx2 = j.at("nx2").get<int>();
    ch.ny2 = j.at("ny2").get<int>();
    ch.ny3 = j.at("ny3").get<int>();
    ch.ny4 = j.at("ny4").get<int>();
    ch.p = j.at("p").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("channel JSON field error: ") +
                                e.what());
  }
  if (const auto v = ch.validate(); !v.valid)
    throw std::invalid_argument("invalid channel: " + v.violation);
  return ch;
}

std::string channel_to_json(const FiniteChannel& ch) {
  nlohmann::json j;
  j["nx1"] = ch.nx1;
  j["nx2"] = ch.nx2;
  j["ny2"] = ch.ny2;
  j["ny3"] = ch.ny3;
  j["ny4"] = ch.ny4;
  j["p"] = ch.p;
  return j.dump(2) + "\n";
}

namespace {

FiniteChannel make_degraded_binary() {
  // y2 = x1;  y3 = x2 + noise(0.1);  y4 = x1 + noise(0.02 or 0.05 by x2).
  FiniteChannel ch;
  ch.nx1 = ch.nx2 = ch.ny2 = ch.ny3 = ch.ny4 = 2;
  ch.p.assign(32, 0.0);
  const double p3 = 0.1;
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      const double a = x2 == 0 ? 0.02 : 0.05;
      for (int y3 = 0; y3 < 2; ++y3) {
        const double q3 = y3 == x2 ? 1.0 - p3 : p3;
        for (int y4 = 0; y4 < 2; ++y4) {
          const double q4 = y4 == x1 ? 1.0 - a : a;
          ch.p[ch.index(x1, x2, x1, y3, y4)] = q3 * q4;
        }
      }
    }
  }
  return ch;
}

FiniteChannel make_paired_outputs() {
  // y2 = x1;  y3 = x2;  y4 encodes the pair (x1,x2) losslessly.
  FiniteChannel ch;
  ch.nx1 = ch.nx2 = ch.ny2 = ch.ny3 = 2;
  ch.ny4 = 4;
  ch.p.assign(64, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      ch.p[ch.index(x1, x2, x1, x2, 2 * x1 + x2)] = 1.0;
  return ch;
}

FiniteChannel make_noiseless_xor() {
  // y2 = x1;  y3 = y4 = x1 xor x2.
  FiniteChannel ch;
  ch.nx1 = ch.nx2 = ch.ny2 = ch.ny3 = ch.ny4 = 2;
  ch.p.assign(32, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      ch.p[ch.index(x1, x2, x1, x1 ^ x2, x1 ^ x2)] = 1.0;
  return ch;
}

}  // namespace

std::optional<FiniteChannel> builtin_channel(const std::string& name) {
  if (name == "degraded-binary") return make_degraded_binary();
  if (name == "paired-outputs") return make_paired_outputs();
  if (name == "noiseless-xor") return make_noiseless_xor();
  return std::nullopt;
}

std::vector<std::string> builtin_channel_names() {
  return {"degraded-binary", "paired-outputs", "noiseless-xor"};
}

Validity InputFamily::validate(int nx1, int nx2) const {
  const auto bad = [](const std::string& why) { return Validity{false, why}; };
  if (nt < 1) return bad("auxiliary alphabet must be nonempty");
  if (pt.size() != static_cast<std::size_t>(nt) ||
      px1_given_t.size() != static_cast<std::size_t>(nt) * nx1 ||
      px2_given_t.size() != static_cast<std::size_t>(nt) * nx2)
    return bad("input family array sizes do not match nt and the alphabets");
  const auto check_simplex = [&](const double* v, int n,
                                 const std::string& what) -> Validity {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!std::isfinite(v[k]) || v[k] < 0.0)
        return bad(what + " has a negative or non-finite mass");
      sum += v[k];
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      return bad(what + " sums to " + std::to_string(sum));
    return {};
  };
  if (auto v = check_simplex(pt.data(), nt, "p(t)"); !v.valid) return v;
  for (int t = 0; t < nt; ++t) {
    if (auto v = check_simplex(&px1_given_t[t * nx1], nx1,
                               "p(x1|t=" + std::to_string(t) + ")");
        !v.valid)
      return v;
    if (auto v = check_simplex(&px2_given_t[t * nx2], nx2,
                               "p(x2|t=" + std::to_string(t) + ")");
        !v.valid)
      return v;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Joint distribution and information measures.
// ---------------------------------------------------------------------------

JointPmf joint_pmf(const FiniteChannel& ch, const InputFamily& fam) {
  JointPmf j;
  j.dims = {fam.nt, ch.nx1, ch.nx2, ch.ny2, ch.ny3, ch.ny4};
  j.p.assign(static_cast<std::size_t>(fam.nt) * ch.nx1 * ch.nx2 * ch.ny2 *
                 ch.ny3 * ch.ny4,
             0.0);
  std::size_t f = 0;
  for (int t = 0; t < fam.nt; ++t) {
    for (int x1 = 0; x1 < ch.nx1; ++x1) {
      for (int x2 = 0; x2 < ch.nx2; ++x2) {
        const double w = fam.pt[t] * fam.px1_given_t[t * ch.nx1 + x1] *
                         fam.px2_given_t[t * ch.nx2 + x2];
        const std::size_t base = ch.index(x1, x2, 0, 0, 0);
        const std::size_t block =
            static_cast<std::size_t>(ch.ny2) * ch.ny3 * ch.ny4;
        for (std::size_t k = 0; k < block; ++k) j.p[f + k] = w * ch.p[base + k];
        f += block;
      }
    }
  }
  return j;
}

double marginal_entropy(const JointPmf& joint, unsigned axes) {
  if (axes == 0) return 0.0;
  std::size_t msize = 1;
  for (int k = 0; k < 6; ++k)
    if (axes >> k & 1u) msize *= joint.dims[k];
  std::vector<double> marg(msize, 0.0);
  std::array<int, 6> idx{};
  for (std::size_t f = 0; f < joint.p.size(); ++f) {
    std::size_t mi = 0;
    for (int k = 0; k < 6; ++k)
      if (axes >> k & 1u) mi = mi * joint.dims[k] + idx[k];
    marg[mi] += joint.p[f];
    for (int k = 5; k >= 0; --k) {
      if (++idx[k] < joint.dims[k]) break;
      idx[k] = 0;
    }
  }
  return entropy_of(marg);
}

double mutual_information(const JointPmf& joint, unsigned a, unsigned b,
                          unsigned c) {
  const double hac = marginal_entropy(joint, a | c);
  const double hbc = marginal_entropy(joint, b | c);
  const double habc = marginal_entropy(joint, a | b | c);
  const double hc = marginal_entropy(joint, c);
  return hac + hbc - habc - hc;
}

// ---------------------------------------------------------------------------
// Condition checks.
// ---------------------------------------------------------------------------

std::string condition_name(ChannelCondition c) {
  switch (c) {
    case ChannelCondition::DegradedRx1:
      return "degraded_rx1";
    case ChannelCondition::SemideterministicRx1:
      return "semideterministic_rx1";
    case ChannelCondition::StrongInterferenceRx1:
      return "strong_interference_rx1";
    case ChannelCondition::StrongInterferenceRx2:
      return "strong_interference_rx2";
    case ChannelCondition::StrongSumInterference:
      return "strong_sum_interference";
    case ChannelCondition::StrongConditionalRx2:
      return "strong_conditional_rx2";
  }
  return "unknown";
}

namespace {

ConditionReport check_degraded(const FiniteChannel& ch) {
  ConditionReport rep;
  rep.condition = ChannelCondition::DegradedRx1;
  rep.structural = true;
  double worst = 0.0;  // largest dependence of p(y3|x1,x2,y2) on x1
  std::string witness;
  for (int x2 = 0; x2 < ch.nx2; ++x2) {
    for (int y2 = 0; y2 < ch.ny2; ++y2) {
      // Conditional rows p(y3 | x1, x2, y2) for each x1 with defined support.
      std::vector<std::vector<double>> rows;
      std::vector<int> which;
      for (int x1 = 0; x1 < ch.nx1; ++x1) {
        double p2 = 0.0;
        std::vector<double> row(ch.ny3, 0.0);
        for (int y3 = 0; y3 < ch.ny3; ++y3)
          for (int y4 = 0; y4 < ch.ny4; ++y4) {
            const double v = ch.at(x1, x2, y2, y3, y4);
            p2 += v;
            row[y3] += v;
          }
        if (p2 <= 1e-15) continue;  // conditional undefined: vacuous here
        for (double& v : row) v /= p2;
        rows.push_back(std::move(row));
        which.push_back(x1);
      }
      for (std::size_t i = 1; i < rows.size(); ++i) {
        for (int y3 = 0; y3 < ch.ny3; ++y3) {
          const double dev = std::abs(rows[i][y3] - rows[0][y3]);
          if (dev > worst) {
            worst = dev;
            std::ostringstream os;
            os << "p(y3=" << y3 << "|x1,x2=" << x2 << ",y2=" << y2
               << ") differs between x1=" << which[0] << " and x1=" << which[i]
               << " by " << dev;
            witness = os.str();
          }
        }
      }
    }
  }
  rep.worst_margin = -worst;
  rep.holds = worst <= kStructuralTol;
  rep.witness = witness;
  return rep;
}

ConditionReport check_semideterministic(const FiniteChannel& ch) {
  ConditionReport rep;
  rep.condition = ChannelCondition::SemideterministicRx1;
  rep.structural = true;
  double worst = 0.0;
  std::string witness;
  for (int x1 = 0; x1 < ch.nx1; ++x1) {
    int target = -1;
    for (int x2 = 0; x2 < ch.nx2; ++x2) {
      std::vector<double> py2(ch.ny2, 0.0);
      for (int y2 = 0; y2 < ch.ny2; ++y2)
        for (int y3 = 0; y3 < ch.ny3; ++y3)
          for (int y4 = 0; y4 < ch.ny4; ++y4)
            py2[y2] += ch.at(x1, x2, y2, y3, y4);
      const int arg = static_cast<int>(
          std::max_element(py2.begin(), py2.end()) - py2.begin());
      if (x2 == 0) target = arg;
      const double dev =
          std::max(std::abs(py2[target] - 1.0),
                   static_cast<double>(arg != target));
      if (dev > worst) {
        worst = dev;
        std::ostringstream os;
        os << "p(y2|x1=" << x1 << ",x2=" << x2
           << ") is not a point mass on a function of x1 (deviation " << dev
           << ")";
        witness = os.str();
      }
    }
  }
  rep.worst_margin = -worst;
  rep.holds = worst <= kStructuralTol;
  rep.witness = witness;
  return rep;
}

std::vector<double> dirichlet(std::mt19937_64& rng, int n) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    x = g(rng);
    sum += x;
  }
  if (sum <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / n);
    return v;
  }
  for (double& x : v) x /= sum;
  return v;
}

std::string family_summary(const InputFamily& f, int nx1, int nx2) {
  std::ostringstream os;
  os.precision(4);
  os << "nt=" << f.nt << " pt=[";
  for (int t = 0; t < f.nt; ++t) os << (t ? "," : "") << f.pt[t];
  os << "] px1=[";
  for (int t = 0; t < f.nt; ++t)
    for (int x = 0; x < nx1; ++x)
      os << (t + x ? "," : "") << f.px1_given_t[t * nx1 + x];
  os << "] px2=[";
  for (int t = 0; t < f.nt; ++t)
    for (int x = 0; x < nx2; ++x)
      os << (t + x ? "," : "") << f.px2_given_t[t * nx2 + x];
  os << "]";
  return os.str();
}

ConditionReport check_sampled(const FiniteChannel& ch, ChannelCondition cond,
                              std::uint64_t seed, int samples) {
  ConditionReport rep;
  rep.condition = cond;
  rep.structural = false;

  std::vector<InputFamily> fams;
  std::mt19937_64 rng(seed);
  const int per_nt = std::max(1, samples / 3);
  for (int nt = 1; nt <= 3; ++nt) {
    for (int k = 0; k < per_nt; ++k) {
      InputFamily f;
      f.nt = nt;
      f.pt = dirichlet(rng, nt);
      for (int t = 0; t < nt; ++t) {
        auto a = dirichlet(rng, ch.nx1);
        f.px1_given_t.insert(f.px1_given_t.end(), a.begin(), a.end());
        auto b = dirichlet(rng, ch.nx2);
        f.px2_given_t.insert(f.px2_given_t.end(), b.begin(), b.end());
      }
      fams.push_back(std::move(f));
    }
  }
  for (int i1 = 0; i1 < ch.nx1; ++i1) {
    for (int i2 = 0; i2 < ch.nx2; ++i2) {
      InputFamily f;
      f.nt = 1;
      f.pt = {1.0};
      f.px1_given_t.assign(ch.nx1, 0.0);
      f.px1_given_t[i1] = 1.0;
      f.px2_given_t.assign(ch.nx2, 0.0);
      f.px2_given_t[i2] = 1.0;
      fams.push_back(std::move(f));
    }
  }
  {
    InputFamily f;
    f.nt = 1;
    f.pt = {1.0};
    f.px1_given_t.assign(ch.nx1, 1.0 / ch.nx1);
    f.px2_given_t.assign(ch.nx2, 1.0 / ch.nx2);
    fams.push_back(std::move(f));
  }

  double worst = std::numeric_limits<double>::infinity();
  std::string witness;
  for (const auto& f : fams) {
    const JointPmf j = joint_pmf(ch, f);
    double margin = 0.0;
    switch (cond) {
      case ChannelCondition::StrongInterferenceRx1:
        margin = mutual_information(j, AxX2, AxY3, AxX1) -
                 mutual_information(j, AxX2, AxY4, AxX1);
        break;
      case ChannelCondition::StrongInterferenceRx2:
        margin = mutual_information(j, AxX1, AxY4) -
                 mutual_information(j, AxX1, AxY3);
        break;
      case ChannelCondition::StrongSumInterference:
        margin = mutual_information(j, AxX1 | AxX2, AxY4) -
                 mutual_information(j, AxX1 | AxX2, AxY3);
        break;
      case ChannelCondition::StrongConditionalRx2:
        margin = mutual_information(j, AxX1, AxY4, AxY2 | AxX2) -
                 mutual_information(j, AxX1, AxY3, AxY2 | AxX2);
        break;
      default:
        break;
    }
    if (margin < worst) {
      worst = margin;
      witness = family_summary(f, ch.nx1, ch.nx2);
    }
  }
  rep.samples = fams.size();
  rep.worst_margin = worst;
  rep.holds = worst >= -kMiConditionTol;
  rep.witness = (rep.holds ? "worst margin at " : "counterexample ") + witness;
  return rep;
}

}  // namespace

ConditionReport check_condition(const FiniteChannel& ch, ChannelCondition c,
                                std::uint64_t seed, int samples) {
  if (const auto v = ch.validate(); !v.valid)
    throw std::invalid_argument("invalid channel: " + v.violation);
  switch (c) {
    case ChannelCondition::DegradedRx1:
      return check_degraded(ch);
    case ChannelCondition::SemideterministicRx1:
      return check_semideterministic(ch);
    default:
      return check_sampled(ch, c, seed, samples);
  }
}

std::vector<ConditionReport> check_conditions(const FiniteChannel& ch,
                                              std::uint64_t seed,
                                              int samples) {
  std::vector<ConditionReport> out;
  for (ChannelCondition c :
       {ChannelCondition::DegradedRx1, ChannelCondition::SemideterministicRx1,
        ChannelCondition::StrongInterferenceRx1,
        ChannelCondition::StrongInterferenceRx2,
        ChannelCondition::StrongSumInterference,
        ChannelCondition::StrongConditionalRx2})
    out.push_back(check_condition(ch, c, seed, samples));
  return out;
}

// ---------------------------------------------------------------------------
// Capacity enumeration.
// ---------------------------------------------------------------------------

namespace {

// All tuples of `parts` nonnegative ints summing to exactly `total`.
void compositions_exact(int total, int parts, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions_exact(total - v, parts - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  compositions_exact(total, parts, cur, out);
  return out;
}

// Precomputed per-pair and per-cell data for the fast family evaluation.
struct PairTables {
  int nx1 = 0, nx2 = 0;
  std::vector<std::vector<double>> d1, d2;  // grid distributions per input
  int npairs = 0;                           // d1.size() * d2.size()
  std::vector<double> v1;     // per pair: the R1 constraint value
  std::vector<double> v2;     // per pair: I(X2;Y4|X1)
  std::vector<double> outer;  // per pair: p(x1,x2) cells, nx1*nx2 each
  // Channel cell data for the mixture sum-rate terms.
  std::vector<double> py3_cell, py4_cell;  // [cell*ny + y]
  std::vector<double> h3_cell, h4_cell;    // H(Y|x1,x2)
  int ny3 = 0, ny4 = 0;
};

InputFamily product_family(const std::vector<double>& d1,
                           const std::vector<double>& d2) {
  InputFamily f;
  f.nt = 1;
  f.pt = {1.0};
  f.px1_given_t = d1;
  f.px2_given_t = d2;
  return f;
}

PairTables build_pair_tables(const FiniteChannel& ch, int q, bool semidet_r1) {
  PairTables tab;
  tab.nx1 = ch.nx1;
  tab.nx2 = ch.nx2;
  tab.ny3 = ch.ny3;
  tab.ny4 = ch.ny4;
  for (const auto& c : compositions(q, ch.nx1)) {
    std::vector<double> d(ch.nx1);
    for (int k = 0; k < ch.nx1; ++k) d[k] = static_cast<double>(c[k]) / q;
    tab.d1.push_back(std::move(d));
  }
  for (const auto& c : compositions(q, ch.nx2)) {
    std::vector<double> d(ch.nx2);
    for (int k = 0; k < ch.nx2; ++k) d[k] = static_cast<double>(c[k]) / q;
    tab.d2.push_back(std::move(d));
  }
  tab.npairs = static_cast<int>(tab.d1.size() * tab.d2.size());

  const int cells = ch.nx1 * ch.nx2;
  tab.py3_cell.assign(static_cast<std::size_t>(cells) * ch.ny3, 0.0);
  tab.py4_cell.assign(static_cast<std::size_t>(cells) * ch.ny4, 0.0);
  tab.h3_cell.assign(cells, 0.0);
  tab.h4_cell.assign(cells, 0.0);
  for (int x1 = 0; x1 < ch.nx1; ++x1) {
    for (int x2 = 0; x2 < ch.nx2; ++x2) {
      const int cell = x1 * ch.nx2 + x2;
      std::vector<double> p3(ch.ny3, 0.0), p4(ch.ny4, 0.0);
      for (int y2 = 0; y2 < ch.ny2; ++y2)
        for (int y3 = 0; y3 < ch.ny3; ++y3)
          for (int y4 = 0; y4 < ch.ny4; ++y4) {
            const double v = ch.at(x1, x2, y2, y3, y4);
            p3[y3] += v;
            p4[y4] += v;
          }
      for (int y = 0; y < ch.ny3; ++y) tab.py3_cell[cell * ch.ny3 + y] = p3[y];
      for (int y = 0; y < ch.ny4; ++y) tab.py4_cell[cell * ch.ny4 + y] = p4[y];
      tab.h3_cell[cell] = entropy_of(p3);
      tab.h4_cell[cell] = entropy_of(p4);
    }
  }

  tab.v1.resize(tab.npairs);
  tab.v2.resize(tab.npairs);
  tab.outer.assign(static_cast<std::size_t>(tab.npairs) * cells, 0.0);
  for (std::size_t i = 0; i < tab.d1.size(); ++i) {
    for (std::size_t j = 0; j < tab.d2.size(); ++j) {
      const int pair = static_cast<int>(i * tab.d2.size() + j);
      const InputFamily f = product_family(tab.d1[i], tab.d2[j]);
      const JointPmf joint = joint_pmf(ch, f);
      if (semidet_r1) {
        const double hy2_x2 = marginal_entropy(joint, AxY2 | AxX2) -
                              marginal_entropy(joint, AxX2);
        tab.v1[pair] =
            hy2_x2 + mutual_information(joint, AxX1, AxY3, AxY2 | AxX2);
      } else {
        tab.v1[pair] = mutual_information(joint, AxX1, AxY2, AxX2);
      }
      tab.v2[pair] = mutual_information(joint, AxX2, AxY4, AxX1);
      for (int x1 = 0; x1 < ch.nx1; ++x1)
        for (int x2 = 0; x2 < ch.nx2; ++x2)
          tab.outer[static_cast<std::size_t>(pair) * cells + x1 * ch.nx2 + x2] =
              tab.d1[i][x1] * tab.d2[j][x2];
    }
  }
  return tab;
}

// Fast constraint values for a weighted multiset of pairs.
FamilyValues fast_values(const PairTables& tab, const int* pairs,
                         const double* w, int nt) {
  FamilyValues out;
  const int cells = tab.nx1 * tab.nx2;
  double mix[16] = {0};
  for (int t = 0; t < nt; ++t) {
    if (w[t] == 0.0) continue;
    out.r1 += w[t] * tab.v1[pairs[t]];
    out.r2 += w[t] * tab.v2[pairs[t]];
    const double* cell = &tab.outer[static_cast<std::size_t>(pairs[t]) * cells];
    for (int c = 0; c < cells; ++c) mix[c] += w[t] * cell[c];
  }
  double py3[4] = {0}, py4[4] = {0};
  double h3 = 0.0, h4 = 0.0;
  for (int c = 0; c < cells; ++c) {
    if (mix[c] == 0.0) continue;
    for (int y = 0; y < tab.ny3; ++y)
      py3[y] += mix[c] * tab.py3_cell[c * tab.ny3 + y];
    for (int y = 0; y < tab.ny4; ++y)
      py4[y] += mix[c] * tab.py4_cell[c * tab.ny4 + y];
    h3 += mix[c] * tab.h3_cell[c];
    h4 += mix[c] * tab.h4_cell[c];
  }
  double hy3 = 0.0, hy4 = 0.0;
  for (int y = 0; y < tab.ny3; ++y) hy3 -= xlog2x(py3[y]);
  for (int y = 0; y < tab.ny4; ++y) hy4 -= xlog2x(py4[y]);
  out.s3 = hy3 - h3;
  out.s4 = hy4 - h4;
  return out;
}

double multiset_count(int npairs, int size) {
  // C(npairs + size - 1, size) as a double (overflow-safe for the cap check).
  double c = 1.0;
  for (int k = 1; k <= size; ++k) c = c * (npairs - 1 + k) / k;
  return c;
}

// Streams every (multiset of pairs, weight composition) family to `emit`,
// parallelized over the first one or two multiset positions.
void enumerate_families(
    const PairTables& tab, int t_max, int q, int nthreads,
    const std::function<void(int tid, const int* pairs, const double* w)>&
        emit) {
  const auto comps = compositions(q, t_max);
  std::vector<std::vector<double>> weights;
  weights.reserve(comps.size());
  for (const auto& c : comps) {
    std::vector<double> w(t_max);
    for (int k = 0; k < t_max; ++k) w[k] = static_cast<double>(c[k]) / q;
    weights.push_back(std::move(w));
  }

  // Work units: the first multiset index (t_max == 1) or the first two.
  std::vector<std::array<int, 2>> units;
  if (t_max == 1) {
    for (int i = 0; i < tab.npairs; ++i) units.push_back({i, -1});
  } else {
    for (int i = 0; i < tab.npairs; ++i)
      for (int j = i; j < tab.npairs; ++j) units.push_back({i, j});
  }

  auto worker = [&](int tid) {
    std::vector<int> pairs(t_max, 0);
    const std::function<void(int)> recurse = [&](int pos) {
      if (pos == t_max) {
        for (const auto& w : weights) emit(tid, pairs.data(), w.data());
        return;
      }
      for (int i = pairs[pos - 1]; i < tab.npairs; ++i) {
        pairs[pos] = i;
        recurse(pos + 1);
      }
    };
    for (std::size_t u = tid; u < units.size();
         u += static_cast<std::size_t>(nthreads)) {
      pairs[0] = units[u][0];
      if (t_max == 1) {
        for (const auto& w : weights) emit(tid, pairs.data(), w.data());
      } else {
        pairs[1] = units[u][1];
        recurse(2);
      }
    }
  };

  if (nthreads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker, t);
    for (auto& t : threads) t.join();
  }
}

std::vector<ChannelCondition> preconditions_for(CapacityTheorem theorem) {
  switch (theorem) {
    case CapacityTheorem::Degraded:
      return {ChannelCondition::DegradedRx1,
              ChannelCondition::StrongInterferenceRx1,
              ChannelCondition::StrongInterferenceRx2};
    case CapacityTheorem::DegradedSum:
      return {ChannelCondition::DegradedRx1,
              ChannelCondition::StrongInterferenceRx1,
              ChannelCondition::StrongSumInterference};
    case CapacityTheorem::Semideterministic:
      return {ChannelCondition::SemideterministicRx1,
              ChannelCondition::StrongInterferenceRx1,
              ChannelCondition::StrongInterferenceRx2,
              ChannelCondition::StrongConditionalRx2};
  }
  return {};
}

void check_capacity_inputs(const FiniteChannel& ch,
                           const CapacityOptions& opt) {
  if (const auto v = ch.validate(); !v.valid)
    throw std::invalid_argument("invalid channel: " + v.violation);
  if (opt.t_max < 1 || opt.q < 1)
    throw std::invalid_argument("t_max and q must be at least 1");
}

}  // namespace

CapacityResult capacity_region(const FiniteChannel& ch,
                               CapacityTheorem theorem,
                               const CapacityOptions& opt) {
  check_capacity_inputs(ch, opt);

  CapacityResult result;
  for (ChannelCondition c : preconditions_for(theorem)) {
    result.preconditions.push_back(
        check_condition(ch, c, opt.seed, opt.condition_samples));
    if (!result.preconditions.back().holds && !result.refused) {
      result.refused = true;
      result.refusal = "channel fails required condition " + condition_name(c) +
                       " (" + result.preconditions.back().witness + ")";
    }
  }
  if (result.refused) return result;

  const bool semidet = theorem == CapacityTheorem::Semideterministic;
  const PairTables tab = build_pair_tables(ch, opt.q, semidet);

  const double npair_multisets = multiset_count(tab.npairs, opt.t_max);
  const double ncomps = multiset_count(opt.t_max, opt.q);  // C(q+t-1, q)
  const double total = npair_multisets * ncomps;
  if (total > static_cast<double>(opt.family_cap))
    throw std::invalid_argument(
        "input-family enumeration would need about " +
        std::to_string(static_cast<unsigned long long>(total)) +
        " evaluations (cap " + std::to_string(opt.family_cap) +
        "); lower t_max or q");

  const int nthreads = effective_thread_count(opt.max_threads);
  struct Worker {
    std::vector<RatePoint> pts;
    std::uint64_t families = 0;
  };
  std::vector<Worker> workers(nthreads);
  const bool sum_both = theorem != CapacityTheorem::DegradedSum;

  enumerate_families(
      tab, opt.t_max, opt.q, nthreads,
      [&](int tid, const int* pairs, const double* w) {
        Worker& wk = workers[tid];
        ++wk.families;
        const FamilyValues v = fast_values(tab, pairs, w, opt.t_max);
        const double s = sum_both ? std::min(v.s3, v.s4) : v.s3;
        const double a = std::min(v.r1, s);
        const double b = std::min(v.r2, s);
        wk.pts.push_back({a, std::max(0.0, std::min(v.r2, s - a))});
        wk.pts.push_back({std::max(0.0, std::min(v.r1, s - b)), b});
        if (wk.pts.size() > 300000)
          wk.pts = convex_closure(std::move(wk.pts)).points;
      });

  std::vector<RatePoint> all;
  for (auto& w : workers) {
    result.families += w.families;
    all.insert(all.end(), w.pts.begin(), w.pts.end());
  }
  result.frontier = convex_closure(std::move(all));
  return result;
}

CapacityResult capacity_degraded(const FiniteChannel& ch,
                                 const CapacityOptions& opt) {
  return capacity_region(ch, CapacityTheorem::Degraded, opt);
}

CapacityResult capacity_degraded_cor(const FiniteChannel& ch,
                                     const CapacityOptions& opt) {
  return capacity_region(ch, CapacityTheorem::DegradedSum, opt);
}

CapacityResult capacity_semidet(const FiniteChannel& ch,
                                const CapacityOptions& opt) {
  return capacity_region(ch, CapacityTheorem::Semideterministic, opt);
}

FamilyValues degraded_family_values(const FiniteChannel& ch,
                                    const InputFamily& fam) {
  const JointPmf j = joint_pmf(ch, fam);
  FamilyValues v;
  v.r1 = mutual_information(j, AxX1, AxY2, AxX2 | AxT);
  v.r2 = mutual_information(j, AxX2, AxY4, AxX1 | AxT);
  v.s3 = mutual_information(j, AxX1 | AxX2, AxY3);
  v.s4 = mutual_information(j, AxX1 | AxX2, AxY4);
  return v;
}

FamilyValues assigned_inner_bound_values(const FiniteChannel& ch,
                                         const InputFamily& fam) {
  const JointPmf j = joint_pmf(ch, fam);
  FamilyValues v;
  v.r1 = mutual_information(j, AxX1, AxY2, AxX2 | AxT);
  v.r2 = mutual_information(j, AxX2, AxY4, AxX1 | AxT);
  // The collapsed split-rate sum terms carry the auxiliary explicitly.
  v.s3 = mutual_information(j, AxX2 | AxX1 | AxT, AxY3);
  v.s4 = mutual_information(j, AxX1 | AxX2 | AxT, AxY4);
  return v;
}

namespace {

// Allocation-free evaluator for the assigned-term route: builds the joint
// tensor for a fixed auxiliary size once per family into caller scratch and
// reads the ten entropy groups through precomputed index maps.
struct AssignedEvaluator {
  std::array<int, 6> dims{};
  std::size_t joint_size = 0;
  struct Group {
    std::vector<std::uint32_t> map;  // joint flat index -> bucket
    std::size_t size = 0;
  };
  // Entropy groups, in the order consumed by values():
  // X1X2T, X2TY2, X1X2TY2, X2T, X1TY4, X1X2TY4, X1T, Y3, X1X2TY3, Y4.
  std::array<Group, 10> groups;

  AssignedEvaluator(const FiniteChannel& ch, int nt) {
    dims = {nt, ch.nx1, ch.nx2, ch.ny2, ch.ny3, ch.ny4};
    joint_size = 1;
    for (int d : dims) joint_size *= static_cast<std::size_t>(d);
    const unsigned masks[10] = {
        AxX1 | AxX2 | AxT,         AxX2 | AxT | AxY2,
        AxX1 | AxX2 | AxT | AxY2,  AxX2 | AxT,
        AxX1 | AxT | AxY4,         AxX1 | AxX2 | AxT | AxY4,
        AxX1 | AxT,                AxY3,
        AxX1 | AxX2 | AxT | AxY3,  AxY4};
    for (int g = 0; g < 10; ++g) {
      Group& grp = groups[g];
      grp.size = 1;
      for (int k = 0; k < 6; ++k)
        if (masks[g] >> k & 1u) grp.size *= dims[k];
      grp.map.resize(joint_size);
      std::array<int, 6> idx{};
      for (std::size_t f = 0; f < joint_size; ++f) {
        std::size_t mi = 0;
        for (int k = 0; k < 6; ++k)
          if (masks[g] >> k & 1u) mi = mi * dims[k] + idx[k];
        grp.map[f] = static_cast<std::uint32_t>(mi);
        for (int k = 5; k >= 0; --k) {
          if (++idx[k] < dims[k]) break;
          idx[k] = 0;
        }
      }
    }
  }

  struct Scratch {
    std::vector<double> joint;
    std::array<std::vector<double>, 10> buckets;
  };

  Scratch make_scratch() const {
    Scratch s;
    s.joint.assign(joint_size, 0.0);
    for (int g = 0; g < 10; ++g) s.buckets[g].assign(groups[g].size, 0.0);
    return s;
  }

  FamilyValues values(const FiniteChannel& ch, const PairTables& tab,
                      const int* pairs, const double* w, Scratch& s) const {
    const std::size_t block =
        static_cast<std::size_t>(ch.ny2) * ch.ny3 * ch.ny4;
    std::size_t f = 0;
    for (int t = 0; t < dims[0]; ++t) {
      const auto& d1 = tab.d1[pairs[t] / tab.d2.size()];
      const auto& d2 = tab.d2[pairs[t] % tab.d2.size()];
      for (int x1 = 0; x1 < ch.nx1; ++x1) {
        for (int x2 = 0; x2 < ch.nx2; ++x2) {
          const double scale = w[t] * d1[x1] * d2[x2];
          const double* row = &ch.p[ch.index(x1, x2, 0, 0, 0)];
          double* dst = &s.joint[f];
          for (std::size_t k = 0; k < block; ++k) dst[k] = scale * row[k];
          f += block;
        }
      }
    }
    std::array<double, 10> h{};
    for (int g = 0; g < 10; ++g) {
      auto& bucket = s.buckets[g];
      std::fill(bucket.begin(), bucket.end(), 0.0);
      const std::uint32_t* map = groups[g].map.data();
      for (std::size_t k = 0; k < joint_size; ++k) {
        const double v = s.joint[k];
        if (v != 0.0) bucket[map[k]] += v;
      }
      h[g] = entropy_of(bucket);
    }
    FamilyValues out;
    out.r1 = h[0] + h[1] - h[2] - h[3];
    out.r2 = h[0] + h[4] - h[5] - h[6];
    out.s3 = h[0] + h[7] - h[8];
    out.s4 = h[0] + h[9] - h[5];
    return out;
  }
};

}  // namespace

AssignmentCheck verify_assignment_identity(const FiniteChannel& ch,
                                           const CapacityOptions& opt) {
  check_capacity_inputs(ch, opt);
  const PairTables tab = build_pair_tables(ch, opt.q, false);

  const double total =
      multiset_count(tab.npairs, opt.t_max) * multiset_count(opt.t_max, opt.q);
  if (total > static_cast<double>(opt.family_cap))
    throw std::invalid_argument(
        "identity check would need about " +
        std::to_string(static_cast<unsigned long long>(total)) +
        " evaluations (cap " + std::to_string(opt.family_cap) +
        "); lower t_max or q");

  const AssignedEvaluator eval(ch, opt.t_max);
  const int nthreads = effective_thread_count(opt.max_threads);
  struct Worker {
    double gap = 0.0;
    std::uint64_t families = 0;
    AssignedEvaluator::Scratch scratch;
  };
  std::vector<Worker> workers(nthreads);
  for (auto& w : workers) w.scratch = eval.make_scratch();

  enumerate_families(
      tab, opt.t_max, opt.q, nthreads,
      [&](int tid, const int* pairs, const double* w) {
        Worker& wk = workers[tid];
        ++wk.families;
        const FamilyValues fast = fast_values(tab, pairs, w, opt.t_max);
        const FamilyValues gen =
            eval.values(ch, tab, pairs, w, wk.scratch);
        wk.gap = std::max({wk.gap, std::abs(fast.r1 - gen.r1),
                           std::abs(fast.r2 - gen.r2),
                           std::abs(fast.s3 - gen.s3),
                           std::abs(fast.s4 - gen.s4)});
      });

  AssignmentCheck out;
  for (const auto& w : workers) {
    out.max_gap = std::max(out.max_gap, w.gap);
    out.families += w.families;
  }
  return out;
}

}  // namespace ccifc
