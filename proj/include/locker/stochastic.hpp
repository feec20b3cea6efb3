#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <random>
#include <vector>

#include "locker/config.hpp"

namespace locker {

// SplitMix64 finalizer; used to derive independent seeds from key paths.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

// Uniform on [0, 1) with 53 random bits.
double to_unit(std::uint64_t bits);
double uniform(std::mt19937_64& rng);
// Counter-based uniform: a pure function of the key path.
double hashed_uniform(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

// Inverse-CDF draw; returns a 0-based index. Zero-mass cells are never hit.
int sample_index(const std::vector<double>& p, double u);

// Request types in the fixed order (c, d, e) lexicographic; NoArrival last.
std::vector<Request> request_types(const ProblemConfig& cfg);
std::vector<double> request_type_probs(const ProblemConfig& cfg);
Request sample_arrival(const ProblemConfig& cfg, double u);

// Law of the pickup day β ∈ {h..B} of a parcel that has spent h days in the
// locker and has not been collected by slot t. t = 0 means the whole day is
// still ahead. Returned vector has B entries indexed by β-1.
// Throws std::domain_error when the survival event has zero probability.
std::vector<double> residual_pickup_distribution(const ProblemConfig& cfg, int c, int h, int t);

struct PickupTag {
  double u_day = 0.0;
  double u_slot = 0.0;
};

struct PickupTime {
  int b = 1;  // days after allocation
  int q = 1;  // slot on that day
};

PickupTime realize_pickup(const ProblemConfig& cfg, int c, const PickupTag& tag);

// Pre-drawn randomness for one evaluation instance. Arrivals depend only on
// (master, instance) and the arrival tables, so every setting of the paper
// grid sees the same requests. Pickup tags are indexed by acceptance order.
class ScenarioStream {
 public:
  ScenarioStream() = default;
  ScenarioStream(std::uint64_t master, std::uint64_t instance, int days, int slots,
                 std::vector<Request> arrivals);

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t instance() const { return instance_; }
  int days() const { return days_; }
  int slots() const { return slots_; }

  Request arrival(int day, int slot) const;
  PickupTag tag(long k) const;

  void dump(std::ostream& out) const;
  static ScenarioStream load(std::istream& in);

  friend bool operator==(const ScenarioStream&, const ScenarioStream&) = default;

 private:
  std::uint64_t master_ = 0;
  std::uint64_t instance_ = 0;
  int days_ = 0;
  int slots_ = 0;
  std::vector<Request> arrivals_;
};

ScenarioStream build_scenario_stream(const ProblemConfig& cfg, std::uint64_t master,
                                     std::uint64_t instance, int days);

// Stream tags used in derive_seed key paths.
namespace stream_key {
inline constexpr std::uint64_t kArrivals = 0xA11;
inline constexpr std::uint64_t kPickups = 0xB0C;
inline constexpr std::uint64_t kFeatures = 0xFEA;
inline constexpr std::uint64_t kRollout = 0x5011;
inline constexpr std::uint64_t kTraining = 0x7A1;
inline constexpr std::uint64_t kPolicy = 0x9011;
}  // namespace stream_key

}  // namespace locker
