#include "locker/sim/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace locker::sim {

double improvement(double policy_mean, double baseline_mean) {
  if (baseline_mean == 0.0) throw std::domain_error("baseline objective is zero");
  return (policy_mean - baseline_mean) / baseline_mean * 100.0;
}

const char* slicer_name(Slicer s) {
  switch (s) {
    case Slicer::kCustomer: return "c";
    case Slicer::kCustomerLead: return "c_e";
    case Slicer::kCustomerSize: return "c_d";
  }
  return "?";
}

std::map<std::string, double> acceptance_rates(const std::vector<const EpisodeResult*>& results, Slicer slicer) {
  std::map<std::string, std::pair<long, long>> counts;
  for (const EpisodeResult* r : results)
    for (const auto& q : r->requests) {
      if (!q.measured) continue;
      std::string cell = "c=" + std::to_string(q.request.c);
      if (slicer == Slicer::kCustomerLead) cell += ",e=" + std::to_string(q.request.e);
      if (slicer == Slicer::kCustomerSize) cell += ",d=" + std::to_string(q.request.d);
      auto& [acc, all] = counts[cell];
      acc += q.accepted;
      ++all;
    }
  std::map<std::string, double> rates;
  for (const auto& [cell, n] : counts) rates[cell] = static_cast<double>(n.first) / n.second;
  return rates;
}

Summary summarize(const std::vector<double>& x, double level) {
  Summary s;
  if (x.empty()) return s;
  const double n = static_cast<double>(x.size());
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.sd = x.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  s.ci_low = s.ci_high = s.mean;
  if (x.size() > 1) {
    boost::math::students_t dist(n - 1);
    const double half = boost::math::quantile(dist, 0.5 + level / 2) * s.sd / std::sqrt(n);
    s.ci_low -= half;
    s.ci_high += half;
  }
  return s;
}

TTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("paired t-test needs two equal samples, n >= 2");
  std::vector<double> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const Summary s = summarize(d);
  TTest r;
  r.df = static_cast<int>(d.size()) - 1;
  if (s.sd == 0.0) {
    r.t = s.mean > 0 ? INFINITY : s.mean < 0 ? -INFINITY : 0.0;
    r.p_greater = s.mean > 0 ? 0.0 : s.mean < 0 ? 1.0 : 0.5;
    return r;
  }
  r.t = s.mean / (s.sd / std::sqrt(static_cast<double>(d.size())));
  r.p_greater = boost::math::cdf(boost::math::complement(boost::math::students_t(r.df), r.t));
  return r;
}

namespace {

std::string setting_label(const ProblemConfig& cfg) { return cfg.setting.empty() ? cfg.name : cfg.setting; }

struct Task {
  int setting, policy, variant, instance;
};

}  // namespace

EvaluationReport evaluate(const EvaluationSpec& spec) {
  if (spec.instances < 1) throw std::invalid_argument("need at least one instance");
  std::vector<Task> tasks;
  for (int s = 0; s < static_cast<int>(spec.settings.size()); ++s)
    for (int p = 0; p < static_cast<int>(spec.settings[s].policies.size()); ++p) {
      const auto& e = spec.settings[s].policies[p];
      if (e.variants.empty()) throw std::invalid_argument("policy " + e.name + " has no pair");
      for (int v = 0; v < static_cast<int>(e.variants.size()); ++v)
        for (int i = 0; i < spec.instances; ++i) tasks.push_back({s, p, v, i});
    }
  // Streams depend on the setting's demand only, so all policies share them.
  std::vector<std::vector<ScenarioStream>> streams(spec.settings.size());
  for (size_t s = 0; s < spec.settings.size(); ++s)
    for (int i = 0; i < spec.instances; ++i)
      streams[s].push_back(build_scenario_stream(spec.settings[s].cfg, spec.master_seed,
                                                 static_cast<std::uint64_t>(i + 1), spec.days));

  std::vector<EpisodeResult> results(tasks.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (size_t k = next++; k < tasks.size(); k = next++) {
      const Task& t = tasks[k];
      const auto& se = spec.settings[t.setting];
      try {
        results[k] = run_episode(se.cfg, se.policies[t.policy].variants[t.variant], streams[t.setting][t.instance],
                                 spec.days, spec.warmup);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int jobs = std::max(1, spec.jobs);
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& th : threads) th.join();
  if (error) std::rethrow_exception(error);

  // Reduction in a canonical order: settings and policies sorted by label.
  struct Key {
    std::string setting, policy;
    int s, p;
  };
  std::vector<Key> keys;
  for (int s = 0; s < static_cast<int>(spec.settings.size()); ++s)
    for (int p = 0; p < static_cast<int>(spec.settings[s].policies.size()); ++p)
      keys.push_back({setting_label(spec.settings[s].cfg), spec.settings[s].policies[p].name, s, p});
  std::sort(keys.begin(), keys.end(),
            [](const Key& a, const Key& b) { return std::tie(a.setting, a.policy) < std::tie(b.setting, b.policy); });

  std::vector<std::vector<const EpisodeResult*>> by_cell(keys.size());
  std::map<std::pair<int, int>, size_t> cell_of;
  for (size_t k = 0; k < keys.size(); ++k) cell_of[{keys[k].s, keys[k].p}] = k;
  std::vector<std::vector<std::vector<const EpisodeResult*>>> by_instance(
      keys.size(), std::vector<std::vector<const EpisodeResult*>>(spec.instances));
  for (size_t k = 0; k < tasks.size(); ++k) {
    const size_t c = cell_of.at({tasks[k].setting, tasks[k].policy});
    by_cell[c].push_back(&results[k]);
    by_instance[c][tasks[k].instance].push_back(&results[k]);
  }

  EvaluationReport rep;
  std::vector<std::vector<double>> objective(keys.size());
  for (size_t c = 0; c < keys.size(); ++c) {
    for (int i = 0; i < spec.instances; ++i) {
      const auto& runs = by_instance[c][i];
      InstanceRow row{keys[c].setting, keys[c].policy, static_cast<std::uint64_t>(i + 1), 0.0, 0.0, 0};
      for (const EpisodeResult* r : runs) {
        row.weighted_objective += r->weighted_reward;
        row.accepted += r->accepted;
      }
      row.weighted_objective /= runs.size();
      row.accepted /= runs.size();
      row.requests = runs.front()->measured_requests;
      objective[c].push_back(row.weighted_objective);
      rep.results.push_back(row);
    }
    for (Slicer sl : {Slicer::kCustomer, Slicer::kCustomerLead, Slicer::kCustomerSize})
      for (const auto& [cell, rate] : acceptance_rates(by_cell[c], sl))
        rep.rates.push_back({keys[c].setting, keys[c].policy, slicer_name(sl), cell, rate});
    const auto& first = by_cell[c].front()->snapshots;
    for (size_t j = 0; j < first.size(); ++j) {
      OccupancyRow row{keys[c].setting, keys[c].policy, first[j].day, first[j].slot, 0.0, 0.0};
      for (const EpisodeResult* r : by_cell[c]) {
        row.occupied += r->snapshots[j].occupied;
        row.pending += r->snapshots[j].pending;
      }
      row.occupied /= by_cell[c].size();
      row.pending /= by_cell[c].size();
      rep.occupancy.push_back(row);
    }
  }

  std::map<std::string, std::vector<double>> across;
  for (size_t c = 0; c < keys.size(); ++c) {
    size_t base = keys.size();
    for (size_t b = 0; b < keys.size(); ++b)
      if (keys[b].setting == keys[c].setting && keys[b].policy == spec.baseline) base = b;
    if (base == keys.size()) throw std::invalid_argument("baseline " + spec.baseline + " missing in " + keys[c].setting);
    PolicySummary ps;
    ps.setting = keys[c].setting;
    ps.policy = keys[c].policy;
    ps.objective = summarize(objective[c]);
    ps.improvement = improvement(ps.objective.mean, summarize(objective[base]).mean);
    if (spec.instances > 1) ps.test = paired_t_test(objective[c], objective[base]);
    across[ps.policy].push_back(ps.improvement);
    rep.summaries.push_back(ps);
  }
  for (const auto& [policy, v] : across)
    rep.overall_improvement[policy] = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  return rep;
}

}  // namespace locker::sim
