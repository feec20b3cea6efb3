#include "locker/cli/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace locker::cli {

namespace fs = std::filesystem;
using allocation::Scheme;
using nlohmann::json;

namespace {

constexpr Scheme kSchemes[3] = {Scheme::kDL, Scheme::kLD, Scheme::kBU};

struct Descriptor {
  policies::Control control;
  Scheme scheme;
  Scheme features;
};

Descriptor parse_descriptor(const std::string& text) {
  const auto slash = text.find('/');
  const std::string head = text.substr(0, slash);
  const auto cut = head.rfind('_');
  if (cut == std::string::npos) throw std::invalid_argument("policy needs CONTROL_SCHEME: " + text);
  Descriptor d{policies::parse_control(head.substr(0, cut)), allocation::parse_scheme(head.substr(cut + 1)),
               Scheme::kDL};
  d.features = slash == std::string::npos ? d.scheme : allocation::parse_scheme(text.substr(slash + 1));
  if (d.features != d.scheme && !policies::uses_weights(d.control))
    throw std::invalid_argument(text + ": only weighted controls have a feature scheme");
  return d;
}

std::string descriptor_name(const Descriptor& d) {
  std::string n = std::string(policies::control_name(d.control)) + "_" + allocation::scheme_name(d.scheme);
  if (d.features != d.scheme) n += std::string("/") + allocation::scheme_name(d.features);
  return n;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::ofstream open_out(const std::string& path) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Scale parse_scale(const std::string& s) {
  if (s == "paper") return Scale::kPaper;
  if (s == "desk") return Scale::kDesk;
  throw std::invalid_argument("unknown scale '" + s + "' (paper, desk)");
}

ExperimentConfig preset(Scale scale) {
  ExperimentConfig x;
  if (scale == Scale::kPaper) {
    x.problem = main_config();
    x.settings = paper_settings();
    for (const char* c : {"FC", "DLP", "V-TD", "V-ER", "V-CER", "R", "RV-TD", "RV-ER", "RV-CER"})
      for (const char* s : {"DL", "LD", "BU"}) x.policies.push_back(std::string(c) + "_" + s);
    x.hp = vfa::Hyperparameters::paper();
    x.training_runs = 5;
    x.instances = 30;
    x.days = 40;
    x.warmup = 10;
  } else {
    x.problem = desk_config("3pu");
    x.settings = {"3pu"};
    x.policies = {"FC_DL", "DLP_DL", "V-TD_DL", "V-ER_DL", "V-CER_DL", "RV-CER_DL"};
    x.hp = vfa::Hyperparameters::scaled(300);
    x.training_runs = 1;
    x.instances = 15;
    x.days = 25;
    x.warmup = 10;
  }
  return x;
}

ExperimentConfig experiment_from_json(const json& j, ExperimentConfig x) {
  if (j.contains("problem")) {
    const auto& p = j.at("problem");
    x.problem = p.contains("preset") ? config_by_name(p.at("preset").get<std::string>(), p.value("setting", ""))
                                     : p.get<ProblemConfig>();
  }
  if (j.contains("settings")) x.settings = j.at("settings").get<std::vector<std::string>>();
  if (j.contains("policies")) x.policies = j.at("policies").get<std::vector<std::string>>();
  x.baseline = j.value("baseline", x.baseline);
  if (j.contains("mismatch")) {
    const auto& m = j.at("mismatch");
    x.mismatch = m.value("enabled", x.mismatch);
    x.mismatch_control = m.value("control", x.mismatch_control);
  }
  if (j.contains("training")) {
    const auto& t = j.at("training");
    x.training_runs = t.value("runs", x.training_runs);
    if (t.contains("hyperparameters")) {
      json hp = x.hp;
      hp.merge_patch(t.at("hyperparameters"));
      x.hp = hp.get<vfa::Hyperparameters>();
    }
  }
  if (j.contains("rollout")) {
    x.rollout.paths = j.at("rollout").value("paths", x.rollout.paths);
    x.rollout.horizon = j.at("rollout").value("horizon", x.rollout.horizon);
  }
  x.dlp_horizon = j.value("dlp_horizon", x.dlp_horizon);
  if (j.contains("evaluation")) {
    const auto& e = j.at("evaluation");
    x.instances = e.value("instances", x.instances);
    x.days = e.value("days", x.days);
    x.warmup = e.value("warmup", x.warmup);
    x.seed = e.value("seed", x.seed);
  }
  x.jobs = j.value("jobs", x.jobs);
  x.output = j.value("output", x.output);

  x.problem.validate();
  for (const auto& s : x.settings) setting_config(x, s).validate();
  if (x.instances < 1 || x.days < 0 || x.warmup < 0 || x.warmup > x.days)
    throw std::invalid_argument("evaluation needs instances >= 1 and 0 <= warmup <= days");
  if (x.training_runs < 1) throw std::invalid_argument("training needs runs >= 1");
  for (const auto& p : effective_policies(x)) {
    const Descriptor d = parse_descriptor(p);
    if (d.features != d.scheme && !x.mismatch)
      throw std::invalid_argument(p + ": mixed feature scheme outside mismatch mode");
  }
  return x;
}

ExperimentConfig load_experiment(const std::string& path, Scale scale) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return experiment_from_json(json::parse(in), preset(scale));
}

json experiment_to_json(const ExperimentConfig& x) {
  return {{"problem", x.problem},
          {"settings", x.settings},
          {"policies", effective_policies(x)},
          {"baseline", x.baseline},
          {"mismatch", {{"enabled", x.mismatch}, {"control", x.mismatch_control}}},
          {"training", {{"runs", x.training_runs}, {"hyperparameters", x.hp}}},
          {"rollout", {{"paths", x.rollout.paths}, {"horizon", x.rollout.horizon}}},
          {"dlp_horizon", x.dlp_horizon},
          {"evaluation", {{"instances", x.instances}, {"days", x.days}, {"warmup", x.warmup}, {"seed", x.seed}}}};
}

std::string experiment_hash(const ExperimentConfig& x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(experiment_to_json(x).dump())));
  return buf;
}

ProblemConfig setting_config(const ExperimentConfig& x, const std::string& setting) {
  ProblemConfig cfg = x.problem;
  if (!setting.empty()) apply_setting(cfg, setting);
  return cfg;
}

std::vector<std::string> setting_labels(const ExperimentConfig& x) {
  if (x.settings.empty()) return {""};
  return x.settings;
}

std::vector<std::string> effective_policies(const ExperimentConfig& x) {
  std::vector<std::string> out;
  auto add = [&](const std::string& p) {
    const std::string n = descriptor_name(parse_descriptor(p));
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  add(x.baseline);
  if (x.mismatch) {
    for (Scheme f : kSchemes)
      for (Scheme a : kSchemes)
        add(descriptor_name({policies::parse_control(x.mismatch_control), a, f}));
  } else {
    for (const auto& p : x.policies) add(p);
  }
  return out;
}

std::uint64_t training_seed(const ExperimentConfig& x, int run) {
  return derive_seed(x.seed, {stream_key::kTraining, static_cast<std::uint64_t>(run)});
}

std::vector<WeightKey> required_weights(const ExperimentConfig& x) {
  std::vector<WeightKey> keys;
  std::set<std::tuple<std::string, int, int, int, int>> seen;
  for (const auto& s : setting_labels(x))
    for (const auto& p : effective_policies(x)) {
      const Descriptor d = parse_descriptor(p);
      if (!policies::uses_weights(d.control)) continue;
      const vfa::Variant v = *policies::weight_variant(d.control);
      for (int r = 0; r < x.training_runs; ++r)
        if (seen.insert({s, int(v), int(d.scheme), int(d.features), r}).second)
          keys.push_back({s, v, d.scheme, d.features, r});
    }
  return keys;
}

std::string weight_path(const ExperimentConfig& x, const WeightKey& k) {
  const std::string setting = k.setting.empty() ? x.problem.name : k.setting;
  return (fs::path(x.output) / "weights" / setting /
          (std::string(vfa::variant_name(k.variant)) + "_" + allocation::scheme_name(k.allocation) + "_" +
           allocation::scheme_name(k.features) + "_run" + std::to_string(k.run) + ".json"))
      .string();
}

std::vector<std::string> cmd_generate(const ExperimentConfig& x) {
  // arrivals do not depend on the setting, so one stream per instance serves all
  const ProblemConfig cfg = setting_config(x, setting_labels(x).front());
  std::vector<std::string> paths;
  for (int i = 1; i <= x.instances; ++i) {
    const auto path = (fs::path(x.output) / "streams" / ("instance_" + std::to_string(i) + ".txt")).string();
    auto out = open_out(path);
    out << provenance_line(x) << "\n";
    build_scenario_stream(cfg, x.seed, static_cast<std::uint64_t>(i), x.days).dump(out);
    paths.push_back(path);
  }
  return paths;
}

std::vector<std::string> cmd_train(const ExperimentConfig& x, bool force) {
  std::vector<WeightKey> todo;
  for (const auto& k : required_weights(x))
    if (force || !fs::exists(weight_path(x, k))) todo.push_back(k);
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (size_t i = next++; i < todo.size(); i = next++) {
      const WeightKey& k = todo[i];
      try {
        const ProblemConfig cfg = setting_config(x, k.setting);
        const std::uint64_t seed = training_seed(x, k.run);
        const auto r = vfa::train(cfg, k.allocation, k.features, k.variant, seed, x.hp);
        const vfa::WeightFile w{allocation::scheme_name(k.allocation), allocation::scheme_name(k.features),
                                vfa::variant_name(k.variant), seed, cfg.hash_hex(), x.hp, r.theta, r.reward_rate};
        json j = vfa::weights_to_json(cfg, w);
        j["experiment"] = experiment_hash(x);
        j["run"] = k.run;
        auto out = open_out(weight_path(x, k));
        out << j.dump(2) << "\n";
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = todo.size();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int j = 1; j < std::max(1, x.jobs); ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  std::vector<std::string> paths;
  for (const auto& k : todo) paths.push_back(weight_path(x, k));
  return paths;
}

EvaluateOutput cmd_evaluate(const ExperimentConfig& x) {
  EvaluateOutput out;
  out.files = cmd_train(x, false);

  sim::EvaluationSpec spec;
  spec.baseline = x.baseline;
  spec.instances = x.instances;
  spec.days = x.days;
  spec.warmup = x.warmup;
  spec.master_seed = x.seed;
  spec.jobs = x.jobs;
  for (const auto& s : setting_labels(x)) {
    sim::SettingEntry se{setting_config(x, s), {}};
    for (const auto& p : effective_policies(x)) {
      const Descriptor d = parse_descriptor(p);
      const std::string head = std::string(policies::control_name(d.control)) + "_" + allocation::scheme_name(d.scheme);
      sim::PolicyEntry e{p, {}};
      auto finish = [&](policies::PolicyPair pair) {
        pair.rollout = x.rollout;
        pair.dlp_horizon = x.dlp_horizon;
        e.variants.push_back(std::move(pair));
      };
      if (!policies::uses_weights(d.control)) {
        finish(policies::make_pair(se.cfg, head));
      } else {
        for (int r = 0; r < x.training_runs; ++r) {
          const WeightKey k{s, *policies::weight_variant(d.control), d.scheme, d.features, r};
          std::ifstream in(weight_path(x, k));
          if (!in) throw std::runtime_error("missing weights " + weight_path(x, k));
          const auto w = vfa::weights_from_json(se.cfg, json::parse(in));
          finish(policies::make_pair(se.cfg, head, w, x.mismatch));
        }
      }
      se.policies.push_back(std::move(e));
    }
    spec.settings.push_back(std::move(se));
  }
  out.report = sim::evaluate(spec);

  const fs::path dir(x.output);
  auto emit = [&](const std::string& name, auto writer) {
    const std::string path = (dir / name).string();
    writer(path, x, out.report);
    out.files.push_back(path);
  };
  emit("results.csv", write_results_csv);
  emit("rates.csv", write_rates_csv);
  emit("occupancy.csv", write_occupancy_csv);
  emit("summary.csv", write_summary_csv);
  if (x.mismatch) {
    const auto table = mismatch_table(out.report.overall_improvement, x.mismatch_control);
    const std::string path = (dir / "mismatch.csv").string();
    auto f = open_out(path);
    f << provenance_line(x) << "\nfeatures,DL,LD,BU\n";
    for (int r = 0; r < 3; ++r) {
      f << allocation::scheme_name(kSchemes[r]);
      for (int c = 0; c < 3; ++c) f << "," << (table[r][c] ? fmt(*table[r][c]) : "");
      f << "\n";
    }
    out.files.push_back(path);
  }
  {
    const std::string path = (dir / "experiment.json").string();
    json j = experiment_to_json(x);
    j["hash"] = experiment_hash(x);
    auto f = open_out(path);
    f << j.dump(2) << "\n";
    out.files.push_back(path);
  }
  return out;
}

std::string provenance_line(const ExperimentConfig& x) {
  std::string seeds;
  for (int r = 0; r < x.training_runs; ++r) seeds += (r ? ";" : "") + std::to_string(training_seed(x, r));
  return "# experiment=" + experiment_hash(x) + " problem=" + x.problem.hash_hex() + " seed=" +
         std::to_string(x.seed) + " training_seeds=" + seeds;
}

void write_results_csv(const std::string& path, const ExperimentConfig& x, const sim::EvaluationReport& r) {
  auto out = open_out(path);
  out << provenance_line(x) << "\nsetting,policy,instance,weighted_objective,accepted,requests\n";
  for (const auto& row : r.results)
    out << quoted(row.setting) << "," << quoted(row.policy) << "," << row.instance << ","
        << fmt(row.weighted_objective) << "," << fmt(row.accepted) << "," << row.requests << "\n";
}

void write_rates_csv(const std::string& path, const ExperimentConfig& x, const sim::EvaluationReport& r) {
  auto out = open_out(path);
  out << provenance_line(x) << "\nsetting,policy,slicer,cell,rate\n";
  for (const auto& row : r.rates)
    out << quoted(row.setting) << "," << quoted(row.policy) << "," << row.slicer << "," << quoted(row.cell) << ","
        << fmt(row.rate) << "\n";
}

void write_occupancy_csv(const std::string& path, const ExperimentConfig& x, const sim::EvaluationReport& r) {
  auto out = open_out(path);
  out << provenance_line(x) << "\nsetting,policy,day,slot,occupied,pending\n";
  for (const auto& row : r.occupancy)
    out << quoted(row.setting) << "," << quoted(row.policy) << "," << row.day << "," << row.slot << ","
        << fmt(row.occupied) << "," << fmt(row.pending) << "\n";
}

void write_summary_csv(const std::string& path, const ExperimentConfig& x, const sim::EvaluationReport& r) {
  auto out = open_out(path);
  out << provenance_line(x)
      << "\nsetting,policy,mean,sd,ci99_low,ci99_high,improvement,t,df,p_greater\n";
  for (const auto& s : r.summaries)
    out << quoted(s.setting) << "," << quoted(s.policy) << "," << fmt(s.objective.mean) << "," << fmt(s.objective.sd)
        << "," << fmt(s.objective.ci_low) << "," << fmt(s.objective.ci_high) << "," << fmt(s.improvement) << ","
        << fmt(s.test.t) << "," << s.test.df << "," << fmt(s.test.p_greater) << "\n";
  for (const auto& [policy, v] : r.overall_improvement) out << "ALL," << quoted(policy) << ",,,,," << fmt(v) << ",,,\n";
}

Report cmd_report(const std::string& output_dir, const std::string& baseline) {
  const std::string path = (fs::path(output_dir) / "results.csv").string();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + "; run evaluate first");
  // (setting, policy) -> objective per instance, in file order
  std::map<std::pair<std::string, std::string>, std::map<long, double>> cells;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "setting,policy,instance,weighted_objective,accepted,requests")
        throw std::runtime_error("unexpected results.csv header: " + line);
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw std::runtime_error("malformed results.csv row: " + line);
    cells[{f[0], f[1]}][std::stol(f[2])] = std::strtod(f[3].c_str(), nullptr);
  }
  Report rep;
  rep.baseline = baseline;
  std::map<std::string, std::vector<double>> across;
  for (const auto& [key, by_instance] : cells) {
    const auto base = cells.find({key.first, baseline});
    if (base == cells.end()) throw std::runtime_error("baseline " + baseline + " missing in " + key.first);
    std::vector<double> x, b;
    for (const auto& [i, v] : by_instance) {
      x.push_back(v);
      b.push_back(base->second.at(i));
    }
    ReportRow r{key.first, key.second, static_cast<int>(x.size())};
    r.mean = sim::summarize(x).mean;
    r.improvement = sim::improvement(r.mean, sim::summarize(b).mean);
    if (x.size() > 1) r.p_greater = sim::paired_t_test(x, b).p_greater;
    across[key.second].push_back(r.improvement);
    rep.rows.push_back(r);
  }
  for (const auto& [policy, v] : across) {
    double s = 0.0;
    for (double d : v) s += d;
    rep.overall.push_back({policy, s / v.size()});
  }
  return rep;
}

std::string format_report(const Report& r) {
  std::ostringstream os;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-8s %-16s %4s %12s %10s %10s\n", "setting", "policy", "n", "objective",
                "vs base %", "p");
  os << buf;
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%-8s %-16s %4d %12.3f %10.2f %10.3g\n", row.setting.c_str(), row.policy.c_str(),
                  row.instances, row.mean, row.improvement, row.p_greater);
    os << buf;
  }
  os << "\nimprovement over " << r.baseline << ", averaged across settings:\n";
  std::map<std::string, double> overall;
  for (const auto& [policy, v] : r.overall) {
    overall[policy] = v;
    std::snprintf(buf, sizeof buf, "  %-16s %8.2f\n", policy.c_str(), v);
    os << buf;
  }
  std::set<std::string> mixed;
  for (const auto& [policy, v] : r.overall)
    if (const auto slash = policy.find('/'); slash != std::string::npos)
      mixed.insert(policy.substr(0, policy.rfind('_', slash)));
  for (const auto& control : mixed)
    os << "\n" << control << " (rows: features, columns: allocation)\n" << format_mismatch(mismatch_table(overall, control));
  return os.str();
}

MismatchTable mismatch_table(const std::map<std::string, double>& overall, const std::string& control) {
  MismatchTable t;
  const auto c = policies::parse_control(control);
  for (int f = 0; f < 3; ++f)
    for (int a = 0; a < 3; ++a) {
      const auto it = overall.find(descriptor_name({c, kSchemes[a], kSchemes[f]}));
      if (it != overall.end()) t[f][a] = it->second;
    }
  return t;
}

std::string format_mismatch(const MismatchTable& t) {
  std::ostringstream os;
  char buf[64];
  os << "          DL        LD        BU\n";
  for (int f = 0; f < 3; ++f) {
    os << allocation::scheme_name(kSchemes[f]);
    for (int a = 0; a < 3; ++a) {
      if (t[f][a])
        std::snprintf(buf, sizeof buf, "%10.2f", *t[f][a]);
      else
        std::snprintf(buf, sizeof buf, "%10s", "-");
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace locker::cli
