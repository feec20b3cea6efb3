#include "locker/stochastic.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace locker {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
  return h;
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) {
  return derive_seed(0x6C6F636B6572ULL, keys);
}

double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng) { return to_unit(rng()); }

double hashed_uniform(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  return to_unit(derive_seed(base, keys));
}

int sample_index(const std::vector<double>& p, double u) {
  double acc = 0.0;
  int last = -1;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    acc += p[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  if (last < 0) throw std::domain_error("sampling from an empty distribution");
  return last;  // rounding slack lands on the last positive cell
}

std::vector<Request> request_types(const ProblemConfig& cfg) {
  std::vector<Request> out;
  for (int c = 1; c <= cfg.C; ++c)
    for (int d = 1; d <= cfg.D; ++d)
      for (int e = 1; e <= cfg.E; ++e) out.push_back({c, d, e});
  out.push_back(kNoArrival);
  return out;
}

std::vector<double> request_type_probs(const ProblemConfig& cfg) {
  std::vector<double> out;
  for (int c = 1; c <= cfg.C; ++c)
    for (int d = 1; d <= cfg.D; ++d)
      for (int e = 1; e <= cfg.E; ++e) out.push_back(cfg.request_prob(c, d, e));
  out.push_back(std::max(0.0, cfg.no_arrival_prob()));
  return out;
}

Request sample_arrival(const ProblemConfig& cfg, double u) {
  return request_types(cfg)[sample_index(request_type_probs(cfg), u)];
}

std::vector<double> residual_pickup_distribution(const ProblemConfig& cfg, int c, int h, int t) {
  if (h < 1 || h > cfg.B - 1) throw std::invalid_argument("dwell out of range");
  if (t < 0 || t > cfg.T + 1) throw std::invalid_argument("slot out of range");
  std::vector<double> w(cfg.B, 0.0);
  const double later_today = t > cfg.T ? 0.0 : static_cast<double>(cfg.T - t) / cfg.T;
  w[h - 1] = cfg.pickup_prob(c, h) * later_today;
  for (int b = h + 1; b <= cfg.B; ++b) w[b - 1] = cfg.pickup_prob(c, b);
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) throw std::domain_error("survival event has probability zero");
  for (double& v : w) v /= total;
  return w;
}

PickupTime realize_pickup(const ProblemConfig& cfg, int c, const PickupTag& tag) {
  PickupTime p;
  p.b = 1 + sample_index(cfg.pickup[c - 1], tag.u_day);
  p.q = 1 + std::min(cfg.T - 1, static_cast<int>(tag.u_slot * cfg.T));
  return p;
}

ScenarioStream::ScenarioStream(std::uint64_t master, std::uint64_t instance, int days, int slots,
                               std::vector<Request> arrivals)
    : master_(master), instance_(instance), days_(days), slots_(slots), arrivals_(std::move(arrivals)) {
  if (static_cast<long>(arrivals_.size()) != static_cast<long>(days_) * slots_)
    throw std::invalid_argument("arrival table size mismatch");
}

Request ScenarioStream::arrival(int day, int slot) const {
  if (day < 1 || day > days_ || slot < 1 || slot > slots_) throw std::out_of_range("stream position");
  return arrivals_[static_cast<size_t>(day - 1) * slots_ + (slot - 1)];
}

PickupTag ScenarioStream::tag(long k) const {
  const std::uint64_t base = derive_seed({master_, instance_, stream_key::kPickups});
  const auto kk = static_cast<std::uint64_t>(k);
  return {hashed_uniform(base, {kk, 0}), hashed_uniform(base, {kk, 1})};
}

void ScenarioStream::dump(std::ostream& out) const {
  out << "# locker scenario stream v1\n";
  out << "master " << master_ << " instance " << instance_ << " days " << days_ << " slots "
      << slots_ << "\n";
  for (int day = 1; day <= days_; ++day)
    for (int slot = 1; slot <= slots_; ++slot) {
      const Request r = arrival(day, slot);
      out << "A " << day << ' ' << slot << ' ' << r.c << ' ' << r.d << ' ' << r.e << "\n";
    }
  char buf[96];
  const long tags = static_cast<long>(days_) * slots_;
  for (long k = 0; k < tags; ++k) {
    const PickupTag t = tag(k);
    std::snprintf(buf, sizeof buf, "P %ld %a %a\n", k, t.u_day, t.u_slot);
    out << buf;
  }
}

ScenarioStream ScenarioStream::load(std::istream& in) {
  std::string line;
  std::uint64_t master = 0, instance = 0;
  int days = -1, slots = -1;
  std::vector<Request> arrivals;
  std::vector<PickupTag> tags;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string kind;
    row >> kind;
    if (kind == "master") {
      std::string w;
      row >> master >> w >> instance >> w >> days >> w >> slots;
    } else if (kind == "A") {
      int day, slot;
      Request r;
      row >> day >> slot >> r.c >> r.d >> r.e;
      if (day != static_cast<int>(arrivals.size()) / std::max(1, slots) + 1)
        throw std::runtime_error("stream arrivals out of order");
      arrivals.push_back(r);
    } else if (kind == "P") {
      long k;
      std::string a, b;
      row >> k >> a >> b;
      tags.push_back({std::strtod(a.c_str(), nullptr), std::strtod(b.c_str(), nullptr)});
    } else {
      throw std::runtime_error("unrecognized stream line: " + line);
    }
    if (!row) throw std::runtime_error("malformed stream line: " + line);
  }
  if (days < 0) throw std::runtime_error("stream header missing");
  ScenarioStream s(master, instance, days, slots, std::move(arrivals));
  for (size_t k = 0; k < tags.size(); ++k) {
    const PickupTag t = s.tag(static_cast<long>(k));
    if (t.u_day != tags[k].u_day || t.u_slot != tags[k].u_slot)
      throw std::runtime_error("stream pickup tags do not match the header seeds");
  }
  return s;
}

ScenarioStream build_scenario_stream(const ProblemConfig& cfg, std::uint64_t master,
                                     std::uint64_t instance, int days) {
  std::mt19937_64 rng(derive_seed({master, instance, stream_key::kArrivals}));
  const auto types = request_types(cfg);
  const auto probs = request_type_probs(cfg);
  std::vector<Request> arrivals;
  arrivals.reserve(static_cast<size_t>(days) * cfg.T);
  for (int i = 0; i < days * cfg.T; ++i) arrivals.push_back(types[sample_index(probs, uniform(rng))]);
  return ScenarioStream(master, instance, days, cfg.T, std::move(arrivals));
}

}  // namespace locker
