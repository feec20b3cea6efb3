#include "locker/allocation/cfa.hpp"

#include <stdexcept>

namespace locker::allocation {

Scheme parse_scheme(const std::string& name) {
  if (name == "DL") return Scheme::kDL;
  if (name == "LD") return Scheme::kLD;
  if (name == "BU") return Scheme::kBU;
  throw std::invalid_argument("unknown allocation scheme '" + name + "'");
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kDL: return "DL";
    case Scheme::kLD: return "LD";
    case Scheme::kBU: return "BU";
  }
  return "?";
}

double upper_bound_s(const ProblemConfig& cfg, int horizon) {
  double s = 0.0;
  for (int d = 1; d <= cfg.D; ++d) s += d * static_cast<double>(horizon) * cfg.capacity(d);
  return 1.0 + s;
}

double upper_bound_w(const ProblemConfig& cfg, int horizon) {
  return 1.0 + (2.0 * horizon - 1.0) * cfg.total_capacity();
}

std::vector<std::vector<double>> cfa_coefficients(Scheme scheme, const ProblemConfig& cfg, int horizon,
                                                  const Mutations& mut) {
  if (scheme == Scheme::kBU) throw std::invalid_argument("BU has no window coefficients");
  const double ub_w = mut.ub_w_override > 0 ? mut.ub_w_override : upper_bound_w(cfg, horizon);
  const double ub_s = upper_bound_s(cfg, horizon);
  std::vector<std::vector<double>> v(cfg.D, std::vector<double>(horizon));
  for (int d = 1; d <= cfg.D; ++d)
    for (int l = 1; l <= horizon; ++l)
      v[d - 1][l - 1] = scheme == Scheme::kDL ? d * l + (2.0 * l - 1.0) / ub_w
                                              : (2.0 * l - 1.0) + d * l / ub_s;
  return v;
}

bool LinearObjective::empty() const { return a.empty() && b.empty() && c.empty(); }

namespace {

LinearObjective size_first(int sizes) {  // Σ δλ w = Σ δ S
  LinearObjective o{std::vector<double>(sizes), std::vector<double>(sizes, 0.0),
                    std::vector<double>(sizes, 0.0)};
  for (int d = 0; d < sizes; ++d) o.a[d] = d + 1;
  return o;
}

LinearObjective length_first(int sizes) {  // Σ (2λ-1) w = 2S - N
  return {std::vector<double>(sizes, 2.0), std::vector<double>(sizes, 1.0),
          std::vector<double>(sizes, 0.0)};
}

LinearObjective next_epoch(int sizes) {  // Σ δ s_δ1
  LinearObjective o{std::vector<double>(sizes, 0.0), std::vector<double>(sizes, 0.0),
                    std::vector<double>(sizes)};
  for (int d = 0; d < sizes; ++d) o.c[d] = d + 1;
  return o;
}

LinearObjective combine(const LinearObjective& p, const LinearObjective& s, double w) {
  LinearObjective o = p;
  for (size_t d = 0; d < o.a.size(); ++d) {
    o.a[d] += w * s.a[d];
    o.b[d] += w * s.b[d];
    o.c[d] += w * s.c[d];
  }
  return o;
}

}  // namespace

SchemeObjective scheme_objective(Scheme scheme, const ProblemConfig& cfg, int horizon, bool features,
                                 const Mutations& mut) {
  const int n = cfg.D;
  const double ub_w = mut.ub_w_override > 0 ? mut.ub_w_override : upper_bound_w(cfg, horizon);
  const double ub_s = upper_bound_s(cfg, horizon);
  switch (scheme) {
    case Scheme::kDL: return {size_first(n), length_first(n), 1.0 / ub_w};
    case Scheme::kLD: return {length_first(n), size_first(n), 1.0 / ub_s};
    case Scheme::kBU:
      if (!features) return {next_epoch(n), {}, 0.0};
      // The DL value stays below ub_s, so its scaled contribution is < 1.
      return {next_epoch(n), combine(size_first(n), length_first(n), 1.0 / ub_w), 1.0 / ub_s};
  }
  throw std::logic_error("unreachable");
}

double evaluate(const LinearObjective& obj, const std::vector<int>& total_free,
                const std::vector<int>& window_count, const std::vector<int>& free_first) {
  double v = 0.0;
  for (size_t d = 0; d < obj.a.size(); ++d)
    v += obj.a[d] * total_free[d] - obj.b[d] * window_count[d] + obj.c[d] * free_first[d];
  return v;
}

long primary_value(Scheme scheme, const WindowCounts& w) {
  long v = 0;
  for (size_t d = 0; d < w.size(); ++d)
    for (size_t l = 0; l < w[d].size(); ++l) {
      const long lam = static_cast<long>(l) + 1;
      v += (scheme == Scheme::kDL ? static_cast<long>(d + 1) * lam : 2 * lam - 1) * w[d][l];
    }
  return v;
}

long secondary_value(Scheme scheme, const WindowCounts& w) {
  return primary_value(scheme == Scheme::kDL ? Scheme::kLD : Scheme::kDL, w);
}

}  // namespace locker::allocation
