#include "locker/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace locker {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("config: " + what);
}

void check_distribution(const std::vector<double>& p, size_t n, const std::string& what) {
  require(p.size() == n, what + " has wrong length");
  double s = 0.0;
  for (double v : p) {
    require(v >= 0.0 && std::isfinite(v), what + " has a negative entry");
    s += v;
  }
  require(std::abs(s - 1.0) < 1e-9, what + " does not sum to 1");
}

std::vector<double> proportional_sizes(const std::vector<int>& q) {
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  std::vector<double> p;
  for (int v : q) p.push_back(v / total);
  return p;
}

// Two customer types: premium (30%, next day) and standard (60%, 1..5 days).
ProblemConfig paper_demand(std::vector<int> q, int slots, const std::string& name) {
  ProblemConfig c;
  c.name = name;
  c.D = static_cast<int>(q.size());
  c.C = 2;
  c.T = slots;
  c.B = 3;
  c.E = 5;
  c.F = 5;
  c.Q = std::move(q);
  c.m = {1.0, 1.0};
  c.customer_prob = {0.3, 0.6};
  const std::vector<double> sizes = proportional_sizes(c.Q);
  c.size_prob = {sizes, sizes};
  c.lead_prob = {{1.0, 0.0, 0.0, 0.0, 0.0}, {0.2, 0.2, 0.3, 0.2, 0.1}};
  c.pickup = {{0.6, 0.2, 0.2}, {0.6, 0.2, 0.2}};
  return c;
}

}  // namespace

double ProblemConfig::no_arrival_prob() const {
  return 1.0 - std::accumulate(customer_prob.begin(), customer_prob.end(), 0.0);
}

int ProblemConfig::total_capacity() const { return std::accumulate(Q.begin(), Q.end(), 0); }

void ProblemConfig::validate() const {
  require(D >= 1 && C >= 1 && T >= 1 && B >= 1 && E >= 1, "dimensions must be positive");
  require(F == E, "F must equal E");
  require(static_cast<int>(Q.size()) == D, "Q must have D entries");
  for (int q : Q) require(q >= 0, "Q must be nonnegative");
  require(static_cast<int>(m.size()) == C, "m must have C entries");
  for (double w : m) require(w > 0.0, "priority weights must be positive");
  require(static_cast<int>(customer_prob.size()) == C, "customer_prob must have C entries");
  double total = 0.0;
  for (double p : customer_prob) {
    require(p >= 0.0, "customer probabilities must be nonnegative");
    total += p;
  }
  require(total <= 1.0 + 1e-9, "arrival probabilities exceed 1");
  require(static_cast<int>(size_prob.size()) == C && static_cast<int>(lead_prob.size()) == C &&
              static_cast<int>(pickup.size()) == C,
          "per-customer tables must have C rows");
  for (int c = 0; c < C; ++c) {
    const std::string tag = " of customer " + std::to_string(c + 1);
    check_distribution(size_prob[c], D, "size_prob" + tag);
    check_distribution(lead_prob[c], E, "lead_prob" + tag);
    check_distribution(pickup[c], B, "pickup" + tag);
  }
}

std::uint64_t ProblemConfig::hash() const {
  const std::string text = nlohmann::json(*this).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string ProblemConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

void to_json(nlohmann::json& j, const ProblemConfig& c) {
  j = nlohmann::json{{"name", c.name},
                     {"setting", c.setting},
                     {"D", c.D},
                     {"C", c.C},
                     {"T", c.T},
                     {"B", c.B},
                     {"E", c.E},
                     {"F", c.F},
                     {"Q", c.Q},
                     {"m", c.m},
                     {"customer_prob", c.customer_prob},
                     {"size_prob", c.size_prob},
                     {"lead_prob", c.lead_prob},
                     {"pickup", c.pickup}};
}

void from_json(const nlohmann::json& j, ProblemConfig& c) {
  c.name = j.value("name", std::string("custom"));
  c.setting = j.value("setting", std::string());
  j.at("D").get_to(c.D);
  j.at("C").get_to(c.C);
  j.at("T").get_to(c.T);
  j.at("B").get_to(c.B);
  j.at("E").get_to(c.E);
  c.F = j.value("F", c.E);
  j.at("Q").get_to(c.Q);
  j.at("m").get_to(c.m);
  j.at("customer_prob").get_to(c.customer_prob);
  j.at("size_prob").get_to(c.size_prob);
  j.at("lead_prob").get_to(c.lead_prob);
  j.at("pickup").get_to(c.pickup);
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  const nlohmann::json j = nlohmann::json::parse(in);
  ProblemConfig cfg;
  if (j.contains("problem")) {
    const auto& p = j.at("problem");
    if (p.contains("preset")) {
      cfg = config_by_name(p.at("preset").get<std::string>(), p.value("setting", std::string()));
    } else {
      cfg = p.get<ProblemConfig>();
    }
  } else {
    cfg = j.get<ProblemConfig>();
  }
  cfg.validate();
  return cfg;
}

PickupLaw parse_pickup_law(const std::string& code) {
  if (code == "id") return PickupLaw::kIdentical;
  if (code == "pf") return PickupLaw::kPremiumFast;
  if (code == "pu") return PickupLaw::kPremiumUltrafast;
  throw std::invalid_argument("unknown pickup law '" + code + "'");
}

const char* pickup_law_code(PickupLaw law) {
  switch (law) {
    case PickupLaw::kIdentical: return "id";
    case PickupLaw::kPremiumFast: return "pf";
    case PickupLaw::kPremiumUltrafast: return "pu";
  }
  return "?";
}

void apply_setting(ProblemConfig& cfg, const std::string& setting) {
  if (setting.size() != 3 || setting[0] < '1' || setting[0] > '9')
    throw std::invalid_argument("setting must look like '3pu', got '" + setting + "'");
  if (cfg.C != 2 || cfg.B != 3)
    throw std::invalid_argument("paper settings need C = 2 and B = 3");
  const PickupLaw law = parse_pickup_law(setting.substr(1));
  cfg.m = {static_cast<double>(setting[0] - '0'), 1.0};
  switch (law) {
    case PickupLaw::kIdentical: cfg.pickup = {{0.6, 0.2, 0.2}, {0.6, 0.2, 0.2}}; break;
    case PickupLaw::kPremiumFast: cfg.pickup = {{0.8, 0.1, 0.1}, {0.5, 0.25, 0.25}}; break;
    case PickupLaw::kPremiumUltrafast: cfg.pickup = {{0.94, 0.04, 0.02}, {0.43, 0.28, 0.29}}; break;
  }
  // Population-wide pickup behaviour must not depend on the setting.
  const double mass = cfg.customer_prob[0] + cfg.customer_prob[1];
  const double target[3] = {0.6, 0.2, 0.2};
  for (int b = 0; b < 3; ++b) {
    const double agg =
        (cfg.customer_prob[0] * cfg.pickup[0][b] + cfg.customer_prob[1] * cfg.pickup[1][b]) / mass;
    if (std::abs(agg - target[b]) > 1e-9)
      throw std::invalid_argument("aggregate pickup law deviates from (0.6, 0.2, 0.2)");
  }
  cfg.setting = setting;
}

std::vector<std::string> paper_settings() {
  return {"1id", "1pf", "1pu", "2id", "2pf", "2pu", "3id", "3pf", "3pu"};
}

ProblemConfig main_config(const std::string& setting) {
  ProblemConfig c = paper_demand({15, 10, 5}, 20, "main");
  apply_setting(c, setting);
  c.validate();
  return c;
}

ProblemConfig desk_config(const std::string& setting) {
  ProblemConfig c = paper_demand({4, 3, 2}, 10, "desk");
  apply_setting(c, setting);
  c.validate();
  return c;
}

ProblemConfig toy_config() {
  ProblemConfig c;
  c.name = "toy";
  c.D = 2;
  c.C = 1;
  c.T = 9;
  c.B = 3;
  c.E = 6;
  c.F = 6;
  c.Q = {3, 2};
  c.m = {1.0};
  c.customer_prob = {0.9};
  c.size_prob = {proportional_sizes(c.Q)};
  c.lead_prob = {std::vector<double>(6, 1.0 / 6.0)};
  c.pickup = {{0.6, 0.2, 0.2}};
  c.validate();
  return c;
}

ProblemConfig tiny_config() {
  ProblemConfig c;
  c.name = "tiny";
  c.D = 2;
  c.C = 1;
  c.T = 3;
  c.B = 2;
  c.E = 2;
  c.F = 2;
  c.Q = {1, 1};
  c.m = {1.0};
  c.customer_prob = {0.8};
  c.size_prob = {{0.5, 0.5}};
  c.lead_prob = {{0.5, 0.5}};
  c.pickup = {{0.7, 0.3}};
  c.validate();
  return c;
}

ProblemConfig config_by_name(const std::string& name, const std::string& setting) {
  if (name == "main") return main_config(setting.empty() ? "1id" : setting);
  if (name == "desk") return desk_config(setting.empty() ? "3pu" : setting);
  if (name == "toy") return toy_config();
  if (name == "tiny") return tiny_config();
  throw std::invalid_argument("unknown config preset '" + name + "'");
}

}  // namespace locker
