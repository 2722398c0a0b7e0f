#include "tvpreg/types.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

namespace tvpreg {

std::string to_string(ModType m) {
  switch (m) {
    case ModType::Ridge: return "ridge";
    case ModType::Double: return "double";
    case ModType::Triple: return "triple";
  }
  return "double";
}

bool mod_type_from_string(const std::string& s, ModType* out) {
  if (s == "ridge") *out = ModType::Ridge;
  else if (s == "double") *out = ModType::Double;
  else if (s == "triple") *out = ModType::Triple;
  else return false;
  return true;
}

PriorSpec default_prior_spec(ModType mod_type, bool sv) {
  PriorSpec s;
  s.mod_type = mod_type;
  s.sv = sv;
  switch (mod_type) {
    case ModType::Ridge:
      s.learn_a_xi = s.learn_a_tau = false;
      s.learn_c_xi = s.learn_c_tau = false;
      s.learn_kappa2_B = s.learn_lambda2_B = false;
      break;
    case ModType::Double:
      s.learn_a_xi = s.learn_a_tau = true;
      s.learn_c_xi = s.learn_c_tau = false;
      s.learn_kappa2_B = s.learn_lambda2_B = true;
      break;
    case ModType::Triple:
      s.learn_a_xi = s.learn_a_tau = true;
      s.learn_c_xi = s.learn_c_tau = true;
      s.learn_kappa2_B = s.learn_lambda2_B = true;
      break;
  }
  return s;
}

namespace {

std::string fmt_double(double v) {
  // shortest representation that parses back to exactly v
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_int(const std::string& s, std::int64_t* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_uint(const std::string& s, std::uint64_t* out) {
  if (s.empty() || s[0] == '-') return false;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_bool(const std::string& s, bool* out) {
  if (s == "true" || s == "1") *out = true;
  else if (s == "false" || s == "0") *out = false;
  else return false;
  return true;
}

struct Entry {
  std::string key;
  std::function<std::string(const PriorSpec&, const MCMCConfig&)> get;
  std::function<bool(PriorSpec&, MCMCConfig&, const std::string&)> set;
};

std::vector<Entry> make_table() {
  std::vector<Entry> t;

  const auto add_double = [&t](const char* key, double PriorSpec::* f) {
    t.push_back({key,
                 [f](const PriorSpec& s, const MCMCConfig&) { return fmt_double(s.*f); },
                 [f](PriorSpec& s, MCMCConfig&, const std::string& v) {
                   return parse_double(v, &(s.*f));
                 }});
  };
  const auto add_bool = [&t](const char* key, bool PriorSpec::* f) {
    t.push_back({key,
                 [f](const PriorSpec& s, const MCMCConfig&) {
                   return std::string(s.*f ? "true" : "false");
                 },
                 [f](PriorSpec& s, MCMCConfig&, const std::string& v) {
                   return parse_bool(v, &(s.*f));
                 }});
  };
  const auto add_mh = [&t](const std::string& prefix, MhTuning PriorSpec::* f) {
    t.push_back({prefix + "_adaptive",
                 [f](const PriorSpec& s, const MCMCConfig&) {
                   return std::string((s.*f).adaptive ? "true" : "false");
                 },
                 [f](PriorSpec& s, MCMCConfig&, const std::string& v) {
                   return parse_bool(v, &(s.*f).adaptive);
                 }});
    t.push_back({prefix + "_initial_sd",
                 [f](const PriorSpec& s, const MCMCConfig&) { return fmt_double((s.*f).initial_sd); },
                 [f](PriorSpec& s, MCMCConfig&, const std::string& v) {
                   return parse_double(v, &(s.*f).initial_sd);
                 }});
    t.push_back({prefix + "_batch_size",
                 [f](const PriorSpec& s, const MCMCConfig&) {
                   return std::to_string((s.*f).batch_size);
                 },
                 [f](PriorSpec& s, MCMCConfig&, const std::string& v) {
                   std::int64_t iv;
                   if (!parse_int(v, &iv)) return false;
                   (s.*f).batch_size = static_cast<int>(iv);
                   return true;
                 }});
    t.push_back({prefix + "_max_adapt",
                 [f](const PriorSpec& s, const MCMCConfig&) { return fmt_double((s.*f).max_adapt); },
                 [f](PriorSpec& s, MCMCConfig&, const std::string& v) {
                   return parse_double(v, &(s.*f).max_adapt);
                 }});
    t.push_back({prefix + "_target_rate",
                 [f](const PriorSpec& s, const MCMCConfig&) { return fmt_double((s.*f).target_rate); },
                 [f](PriorSpec& s, MCMCConfig&, const std::string& v) {
                   return parse_double(v, &(s.*f).target_rate);
                 }});
  };
  const auto add_cfg_int = [&t](const char* key, std::int64_t MCMCConfig::* f) {
    t.push_back({key,
                 [f](const PriorSpec&, const MCMCConfig& c) { return std::to_string(c.*f); },
                 [f](PriorSpec&, MCMCConfig& c, const std::string& v) {
                   return parse_int(v, &(c.*f));
                 }});
  };
  const auto add_cfg_uint = [&t](const char* key, std::uint64_t MCMCConfig::* f) {
    t.push_back({key,
                 [f](const PriorSpec&, const MCMCConfig& c) { return std::to_string(c.*f); },
                 [f](PriorSpec&, MCMCConfig& c, const std::string& v) {
                   return parse_uint(v, &(c.*f));
                 }});
  };

  t.push_back({"mod_type",
               [](const PriorSpec& s, const MCMCConfig&) { return to_string(s.mod_type); },
               [](PriorSpec& s, MCMCConfig&, const std::string& v) {
                 return mod_type_from_string(v, &s.mod_type);
               }});
  add_bool("sv", &PriorSpec::sv);

  add_bool("learn_a_xi", &PriorSpec::learn_a_xi);
  add_bool("learn_a_tau", &PriorSpec::learn_a_tau);
  add_bool("learn_c_xi", &PriorSpec::learn_c_xi);
  add_bool("learn_c_tau", &PriorSpec::learn_c_tau);
  add_bool("learn_kappa2_B", &PriorSpec::learn_kappa2_B);
  add_bool("learn_lambda2_B", &PriorSpec::learn_lambda2_B);

  add_double("a_xi", &PriorSpec::a_xi);
  add_double("a_tau", &PriorSpec::a_tau);
  add_double("c_xi", &PriorSpec::c_xi);
  add_double("c_tau", &PriorSpec::c_tau);
  add_double("kappa2_B", &PriorSpec::kappa2_B);
  add_double("lambda2_B", &PriorSpec::lambda2_B);

  add_double("alpha_a_xi", &PriorSpec::alpha_a_xi);
  add_double("beta_a_xi", &PriorSpec::beta_a_xi);
  add_double("alpha_a_tau", &PriorSpec::alpha_a_tau);
  add_double("beta_a_tau", &PriorSpec::beta_a_tau);
  add_double("alpha_c_xi", &PriorSpec::alpha_c_xi);
  add_double("beta_c_xi", &PriorSpec::beta_c_xi);
  add_double("alpha_c_tau", &PriorSpec::alpha_c_tau);
  add_double("beta_c_tau", &PriorSpec::beta_c_tau);

  add_double("d1", &PriorSpec::d1);
  add_double("d2", &PriorSpec::d2);
  add_double("e1", &PriorSpec::e1);
  add_double("e2", &PriorSpec::e2);

  add_double("c0", &PriorSpec::c0);
  add_double("g0", &PriorSpec::g0);
  add_double("G0", &PriorSpec::G0);

  add_double("b_mu", &PriorSpec::b_mu);
  add_double("B_mu", &PriorSpec::B_mu);
  add_double("a_phi", &PriorSpec::a_phi);
  add_double("b_phi", &PriorSpec::b_phi);
  add_double("B_sigma", &PriorSpec::B_sigma);

  add_mh("mh_a_xi", &PriorSpec::mh_a_xi);
  add_mh("mh_a_tau", &PriorSpec::mh_a_tau);
  add_mh("mh_c_xi", &PriorSpec::mh_c_xi);
  add_mh("mh_c_tau", &PriorSpec::mh_c_tau);

  add_cfg_int("niter", &MCMCConfig::niter);
  add_cfg_int("nburn", &MCMCConfig::nburn);
  add_cfg_int("nthin", &MCMCConfig::nthin);
  add_cfg_uint("seed", &MCMCConfig::seed);
  add_cfg_uint("stream", &MCMCConfig::stream);

  return t;
}

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = make_table();
  return t;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> to_key_values(const PriorSpec& spec,
                                                               const MCMCConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(table().size());
  for (const auto& e : table()) out.emplace_back(e.key, e.get(spec, cfg));
  return out;
}

bool apply_key_value(PriorSpec& spec, MCMCConfig& cfg, const std::string& key,
                     const std::string& value, std::string* err) {
  for (const auto& e : table()) {
    if (e.key != key) continue;
    if (!e.set(spec, cfg, value)) {
      if (err) *err = "invalid value '" + value + "' for key '" + key + "'";
      return false;
    }
    return true;
  }
  if (err) *err = "unknown configuration key '" + key + "'";
  return false;
}

ValidationResult validate(const TimeSeriesData& data, const PriorSpec& spec,
                          const MCMCConfig& cfg) {
  ValidationResult r;
  r.spec = spec;
  r.cfg = cfg;
  auto err = [&r](const std::string& m) { r.errors.push_back(m); };
  auto warn = [&r](const std::string& m) { r.warnings.push_back(m); };

  // data shape and content
  if (data.T() < 2) err("need at least 2 observations");
  if (data.d() < 1) err("need at least 1 covariate column");
  if (data.X.rows() != data.y.size()) err("X and y row counts differ");
  if (!data.names.empty() && static_cast<int>(data.names.size()) != data.d())
    err("column label count does not match X");
  if (!data.y.allFinite()) err("y contains non-finite values");
  if (!data.X.allFinite()) err("X contains non-finite values");

  // chain length
  if (r.cfg.nburn < 0) r.cfg.nburn = std::llround(0.5 * static_cast<double>(r.cfg.niter));
  if (r.cfg.niter < 1) err("niter must be positive");
  if (r.cfg.nthin < 1) err("nthin must be positive");
  if (r.cfg.nburn >= r.cfg.niter) err("nburn must be smaller than niter");
  else if (r.cfg.niter - r.cfg.nburn < r.cfg.nthin) err("no draws would be stored");

  // mod_type-dependent normalization
  if (r.spec.mod_type == ModType::Ridge) {
    if (r.spec.learn_a_xi || r.spec.learn_a_tau || r.spec.learn_c_xi || r.spec.learn_c_tau ||
        r.spec.learn_kappa2_B || r.spec.learn_lambda2_B) {
      warn("ridge prior has no learned shrinkage hyperparameters; learn flags ignored");
      r.spec.learn_a_xi = r.spec.learn_a_tau = false;
      r.spec.learn_c_xi = r.spec.learn_c_tau = false;
      r.spec.learn_kappa2_B = r.spec.learn_lambda2_B = false;
    }
  } else if (r.spec.mod_type == ModType::Double) {
    if (r.spec.learn_c_xi || r.spec.learn_c_tau) {
      warn("c_xi/c_tau are not part of the double-gamma hierarchy; ignored");
      r.spec.learn_c_xi = r.spec.learn_c_tau = false;
    }
  } else {
    // learned triple-gamma pole/tail parameters live on (0, 1/2): 2a, 2c are
    // beta distributed, and the chain starts from the fixed-value field
    const std::pair<std::pair<bool, double>, const char*> ranged[] = {
        {{r.spec.learn_a_xi, r.spec.a_xi}, "a_xi"},
        {{r.spec.learn_a_tau, r.spec.a_tau}, "a_tau"},
        {{r.spec.learn_c_xi, r.spec.c_xi}, "c_xi"},
        {{r.spec.learn_c_tau, r.spec.c_tau}, "c_tau"},
    };
    for (const auto& [lv, name] : ranged) {
      if (lv.first && !(lv.second > 0.0 && lv.second < 0.5))
        err(std::string(name) + " must start in (0, 0.5) when learned under the triple prior");
    }
  }

  // hyperparameter domains
  const auto pos = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) err(std::string(name) + " must be positive and finite");
  };
  pos(r.spec.a_xi, "a_xi");
  pos(r.spec.a_tau, "a_tau");
  pos(r.spec.c_xi, "c_xi");
  pos(r.spec.c_tau, "c_tau");
  pos(r.spec.kappa2_B, "kappa2_B");
  pos(r.spec.lambda2_B, "lambda2_B");
  pos(r.spec.alpha_a_xi, "alpha_a_xi");
  pos(r.spec.beta_a_xi, "beta_a_xi");
  pos(r.spec.alpha_a_tau, "alpha_a_tau");
  pos(r.spec.beta_a_tau, "beta_a_tau");
  pos(r.spec.alpha_c_xi, "alpha_c_xi");
  pos(r.spec.beta_c_xi, "beta_c_xi");
  pos(r.spec.alpha_c_tau, "alpha_c_tau");
  pos(r.spec.beta_c_tau, "beta_c_tau");
  pos(r.spec.d1, "d1");
  pos(r.spec.d2, "d2");
  pos(r.spec.e1, "e1");
  pos(r.spec.e2, "e2");
  pos(r.spec.c0, "c0");
  pos(r.spec.g0, "g0");
  pos(r.spec.G0, "G0");
  pos(r.spec.B_mu, "B_mu");
  pos(r.spec.a_phi, "a_phi");
  pos(r.spec.b_phi, "b_phi");
  pos(r.spec.B_sigma, "B_sigma");
  if (!std::isfinite(r.spec.b_mu)) err("b_mu must be finite");

  const std::pair<const MhTuning*, const char*> mh_list[] = {
      {&r.spec.mh_a_xi, "mh_a_xi"},
      {&r.spec.mh_a_tau, "mh_a_tau"},
      {&r.spec.mh_c_xi, "mh_c_xi"},
      {&r.spec.mh_c_tau, "mh_c_tau"},
  };
  for (const auto& [mh, name] : mh_list) {
    if (!(mh->initial_sd > 0.0)) err(std::string(name) + "_initial_sd must be positive");
    if (mh->batch_size < 1) err(std::string(name) + "_batch_size must be >= 1");
    if (!(mh->max_adapt > 0.0)) err(std::string(name) + "_max_adapt must be positive");
    if (!(mh->target_rate > 0.0 && mh->target_rate < 1.0))
      err(std::string(name) + "_target_rate must be in (0,1)");
  }

  r.ok = r.errors.empty();
  return r;
}

}  // namespace tvpreg
