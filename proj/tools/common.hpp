#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tvpreg.h"

namespace cli {

// throws std::runtime_error carrying tvpreg_last_error() when a call failed
void check(tvpreg_status status, const char* what);

struct OptionsDeleter {
  void operator()(tvpreg_options* p) const { tvpreg_options_free(p); }
};
struct DataDeleter {
  void operator()(tvpreg_data* p) const { tvpreg_data_free(p); }
};
struct FitDeleter {
  void operator()(tvpreg_fit* p) const { tvpreg_fit_free(p); }
};
struct SimDeleter {
  void operator()(tvpreg_sim* p) const { tvpreg_sim_free(p); }
};
using OptionsPtr = std::unique_ptr<tvpreg_options, OptionsDeleter>;
using DataPtr = std::unique_ptr<tvpreg_data, DataDeleter>;
using FitPtr = std::unique_ptr<tvpreg_fit, FitDeleter>;
using SimPtr = std::unique_ptr<tvpreg_sim, SimDeleter>;

// ---- model/sampler configuration flags shared by fit, lpds and backtest ----
//
// Values are applied in order: config file, dedicated flags, --set overrides.
// The model variant (mod_type/sv) is resolved first from the config file,
// then from the flags, and fixes the defaults everything else adjusts.
struct ModelFlags {
  std::string config_path;
  std::string mod_type = "double";
  bool sv = false;
  std::vector<std::string> sets;  // raw key=value pairs

  // dedicated flags mirroring the common knobs; applied only when the user
  // passed them (tracked through the CLI option objects)
  double a_xi = 0, a_tau = 0, c_xi = 0, c_tau = 0;
  double kappa2_B = 0, lambda2_B = 0;
  bool learn_a_xi = true, learn_a_tau = true, learn_c_xi = true, learn_c_tau = true;
  bool learn_kappa2_B = true, learn_lambda2_B = true;
  std::int64_t niter = 0, nburn = -1, nthin = 0;
  std::uint64_t seed = 0;

  // one entry per dedicated flag: forwarded as key=value when the flag was
  // actually passed on the command line
  struct Tracked {
    CLI::Option* opt = nullptr;
    std::string key;
    std::function<std::string()> value;
  };
  std::vector<Tracked> tracked;
  CLI::Option* mod_type_opt = nullptr;
  CLI::Option* sv_opt = nullptr;
};

void add_model_flags(CLI::App* app, ModelFlags* flags);

// builds an options handle per the resolution order above
OptionsPtr build_options(const ModelFlags& flags);

// ---- data source flags shared by fit, lpds and backtest ----
struct DataFlags {
  std::string path;
  std::string response = "y";
  std::vector<std::string> covariates;  // empty: every non-response column
  bool intercept = false;               // prepend an all-ones column
};

void add_data_flags(CLI::App* app, DataFlags* flags, bool required = true);

// numeric matrix pulled out of a CSV per the data flags
struct LoadedData {
  int T = 0, d = 0;
  std::vector<double> y;
  std::vector<double> X;  // row-major T x d
  std::vector<std::string> names;
};

LoadedData load_data(const DataFlags& flags);
LoadedData load_data_csv(const std::string& path, const std::string& response,
                         const std::vector<std::string>& covariates, bool intercept);
DataPtr make_data_handle(const LoadedData& data);

// writes y + covariate columns exactly as fitted (lossless round-trip)
void write_data_csv(const std::string& path, const LoadedData& data);

// ---- manifests ----
nlohmann::json fit_config_json(const tvpreg_fit* fit);
std::string file_digest(const std::string& path);  // 64-bit FNV-1a, hex
void write_json_file(const std::string& path, const nlohmann::json& j);

// parses "a,b,c" into doubles; throws on junk
std::vector<double> parse_double_list(const std::string& s, const char* what);

}  // namespace cli
