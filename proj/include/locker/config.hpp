#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace locker {

// A delivery request. c == 0 encodes NoArrival; otherwise c, d, e are 1-based.
struct Request {
  int c = 0;
  int d = 0;
  int e = 0;

  bool none() const { return c == 0; }
  friend bool operator==(const Request&, const Request&) = default;
};

inline constexpr Request kNoArrival{};

// Global problem parameters. Indices are stored 0-based; the accessor
// functions take the 1-based quantities used throughout the model.
struct ProblemConfig {
  std::string name = "custom";
  std::string setting;  // e.g. "3pu"; empty for hand-built configs

  int D = 0;  // compartment sizes
  int C = 0;  // customer types
  int T = 0;  // request slots per day
  int B = 0;  // max storage days
  int E = 0;  // max lead time
  int F = 0;  // pending-order horizon (= E)

  std::vector<int> Q;                           // [δ-1]
  std::vector<double> m;                        // [c-1]
  std::vector<double> customer_prob;            // [c-1], per slot
  std::vector<std::vector<double>> size_prob;   // [c-1][d-1]
  std::vector<std::vector<double>> lead_prob;   // [c-1][e-1]
  std::vector<std::vector<double>> pickup;      // [c-1][b-1]

  int capacity(int delta) const { return Q[delta - 1]; }
  double weight(int c) const { return m[c - 1]; }
  double pickup_prob(int c, int b) const { return pickup[c - 1][b - 1]; }
  double request_prob(int c, int d, int e) const {
    return customer_prob[c - 1] * size_prob[c - 1][d - 1] * lead_prob[c - 1][e - 1];
  }
  double no_arrival_prob() const;
  int total_capacity() const;
  int horizon_extended() const { return F + B - 1; }
  int feature_length() const { return 1 + D * horizon_extended(); }

  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  // Stable 64-bit FNV-1a digest of the canonical JSON form.
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

void to_json(nlohmann::json& j, const ProblemConfig& cfg);
void from_json(const nlohmann::json& j, ProblemConfig& cfg);

ProblemConfig load_config(const std::string& path);

// Pickup laws of the three paper settings.
enum class PickupLaw { kIdentical, kPremiumFast, kPremiumUltrafast };

PickupLaw parse_pickup_law(const std::string& code);  // "id", "pf", "pu"
const char* pickup_law_code(PickupLaw law);

// Applies "m1" x law, e.g. "3pu". Checks that the population-wide law stays
// (0.6, 0.2, 0.2) when B = 3 and C = 2.
void apply_setting(ProblemConfig& cfg, const std::string& setting);
std::vector<std::string> paper_settings();

// D=3, Q=(15,10,5), T=20, B=3, E=5, two customer types.
ProblemConfig main_config(const std::string& setting = "1id");
// Same demand model at Q=(4,3,2), T=10.
ProblemConfig desk_config(const std::string& setting = "3pu");
// The two-size worked example: Q=(3,2), C=1, T=9, B=3, E=F=6.
ProblemConfig toy_config();
// Q=(1,1), C=1, T=3, B=2, E=2; small enough for exhaustive checks.
ProblemConfig tiny_config();

ProblemConfig config_by_name(const std::string& name, const std::string& setting);

}  // namespace locker
