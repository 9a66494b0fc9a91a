#include "ccifc/scenario.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace ccifc {

namespace {
constexpr double kSumTol = 1e-9;  // simplex-sum and relay-budget boundary slack

bool finite(double x) { return std::isfinite(x); }
}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Classical: return "classical";
    case Strategy::NoDelay: return "nodelay";
    case Strategy::Lookahead: return "lookahead";
  }
  return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
  if (name == "classical") return Strategy::Classical;
  if (name == "nodelay") return Strategy::NoDelay;
  if (name == "lookahead") return Strategy::Lookahead;
  return std::nullopt;
}

double relay_power_demand(const GaussianScenario& s, const PowerAllocation& a,
                          double beta) {
  const double coded = a.bp1 + a.b1 + a.bp2 + a.b2 + a.b3;
  const double coherent = s.h21 * beta * std::sqrt(a.b4 * s.P1) +
                          (1.0 - beta) * std::sqrt(a.g3 * s.P2);
  return s.h21 * s.h21 * beta * beta * coded * s.P1 + coherent * coherent +
         beta * beta * s.N2 + (1.0 - beta) * (1.0 - beta) * (a.g1 + a.g2) * s.P2;
}

Validity validate_allocation(const PowerAllocation& a, const GaussianScenario& s) {
  auto bad = [](const std::string& what) { return Validity{false, what}; };

  const struct { const char* name; double v; } fracs[] = {
      {"bp1", a.bp1}, {"b1", a.b1}, {"bp2", a.bp2}, {"b2", a.b2},
      {"b3", a.b3},   {"b4", a.b4}, {"g1", a.g1},   {"g2", a.g2},
      {"g3", a.g3},
  };
  for (const auto& f : fracs) {
    if (!finite(f.v) || f.v < 0.0 || f.v > 1.0)
      return bad(std::string(f.name) + " outside [0,1]");
  }
  if (a.beta_sum() > 1.0 + kSumTol) return bad("transmitter-1 fractions sum exceeds 1");
  if (a.gamma_sum() > 1.0 + kSumTol) return bad("transmitter-2 fractions sum exceeds 1");

  switch (a.strategy) {
    case Strategy::Classical:
      break;
    case Strategy::Lookahead:
      if (a.bp2 != 0.0 || a.b2 != 0.0)
        return bad("lookahead requires bp2 = b2 = 0");
      break;
    case Strategy::NoDelay: {
      if (!finite(a.relay_beta) || a.relay_beta < 0.0 || a.relay_beta > 1.0)
        return bad("relay_beta outside [0,1]");
      if (!finite(a.relay_h) || a.relay_h <= 0.0)
        return bad("relay_h must be > 0");
      const double demand = relay_power_demand(s, a, a.relay_beta);
      if (a.relay_h * a.relay_h * demand > s.P2 * (1.0 + kSumTol) + kSumTol)
        return bad("relay power budget exceeded (h^2 * demand > P2)");
      break;
    }
  }
  return {};
}

Validity validate_scenario(const GaussianScenario& s) {
  auto bad = [](const std::string& what) { return Validity{false, what}; };
  const struct { const char* name; double v; } fields[] = {
      {"P1", s.P1},   {"P2", s.P2},   {"h21", s.h21}, {"h31", s.h31},
      {"h32", s.h32}, {"h41", s.h41}, {"h42", s.h42}, {"N2", s.N2},
      {"N3", s.N3},   {"N4", s.N4},
  };
  for (const auto& f : fields)
    if (!finite(f.v)) return bad(std::string(f.name) + " not finite");
  if (s.P1 < 0 || s.P2 < 0) return bad("negative power");
  if (s.N2 < 0) return bad("negative N2");
  if (s.N3 <= 0 || s.N4 <= 0) return bad("N3 and N4 must be positive");
  return {};
}

std::optional<FigurePreset> figure_preset(const std::string& name) {
  const double r055 = std::sqrt(0.55);
  const double r15 = std::sqrt(1.5);

  FigurePreset p;
  p.name = name;
  if (name == "fig6" || name == "fig8") {
    p.scenario = {6, 6, 1, 1, r055, r055, 1, 1, 1, 1};
    p.h21_values = {1, 4};
  } else if (name == "fig7") {
    p.scenario = {6, 1.5, 1, 1, r055, r055, 1, 1, 1, 1};
    p.h21_values = {1, 4};
  } else if (name == "fig9strong") {
    p.scenario = {6, 6, 1, 1, r15, r15, 1, 1, 1, 1};
    p.h21_values = {1, 4};
  } else if (name == "fig9mixed") {
    p.scenario = {6, 6, 1, 1, r055, r15, 1, 1, 1, 1};
    p.h21_values = {1, 4};
  } else if (name == "fig10") {
    p.scenario = {6, 6, 1, 1, std::sqrt(2.0), std::sqrt(0.3), 1, 1, 1, 1};
    p.h21_values = {1};
    p.n2_values = {100, 10, 1, 0.1, 0};
  } else {
    return std::nullopt;
  }
  return p;
}

std::vector<std::string> preset_names() {
  return {"fig6", "fig7", "fig8", "fig9strong", "fig9mixed", "fig10"};
}

std::string scenario_to_json(const GaussianScenario& s) {
  nlohmann::json j{{"P1", s.P1},   {"P2", s.P2},   {"h21", s.h21},
                   {"h31", s.h31}, {"h32", s.h32}, {"h41", s.h41},
                   {"h42", s.h42}, {"N2", s.N2},   {"N3", s.N3},
                   {"N4", s.N4}};
  return j.dump(2);
}

std::optional<GaussianScenario> scenario_from_json(const std::string& text,
                                                   std::string* error) {
  auto fail = [&](const std::string& why) -> std::optional<GaussianScenario> {
    if (error) *error = why;
    return std::nullopt;
  };
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return fail("not a JSON object");

  GaussianScenario s;
  const struct { const char* key; double* dst; } fields[] = {
      {"P1", &s.P1},   {"P2", &s.P2},   {"h21", &s.h21}, {"h31", &s.h31},
      {"h32", &s.h32}, {"h41", &s.h41}, {"h42", &s.h42}, {"N2", &s.N2},
      {"N3", &s.N3},   {"N4", &s.N4},
  };
  for (const auto& f : fields) {
    if (!j.contains(f.key) || !j[f.key].is_number())
      return fail(std::string("missing or non-numeric key: ") + f.key);
    *f.dst = j[f.key].get<double>();
  }
  Validity v = validate_scenario(s);
  if (!v.valid) return fail(v.violation);
  return s;
}

bool is_valid_mask_key(const std::string& key) {
  static const char* keys[] = {"bp1", "b1", "bp2", "b2", "b3",
                               "b4",  "g1", "g2",  "g3", "relay_beta"};
  for (const char* k : keys)
    if (key == k) return true;
  return false;
}

bool apply_masks(PowerAllocation& a, const MaskSet& masks, std::string* error) {
  for (const auto& [key, value] : masks) {
    if (key == "bp1") a.bp1 = value;
    else if (key == "b1") a.b1 = value;
    else if (key == "bp2") a.bp2 = value;
    else if (key == "b2") a.b2 = value;
    else if (key == "b3") a.b3 = value;
    else if (key == "b4") a.b4 = value;
    else if (key == "g1") a.g1 = value;
    else if (key == "g2") a.g2 = value;
    else if (key == "g3") a.g3 = value;
    else if (key == "relay_beta") a.relay_beta = value;
    else {
      if (error) *error = "unknown mask key: " + key;
      return false;
    }
  }
  return true;
}

}  // namespace ccifc
