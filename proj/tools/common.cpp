#include "common.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "csv.hpp"
#include "kvfile.hpp"

namespace cli {

void check(tvpreg_status status, const char* what) {
  if (status == TVPREG_OK) return;
  throw std::runtime_error(std::string(what) + ": " + tvpreg_last_error());
}

void add_model_flags(CLI::App* app, ModelFlags* f) {
  app->add_option("--config", f->config_path, "key=value settings file (flags override it)");
  f->mod_type_opt = app->add_option("--mod-type", f->mod_type,
                                    "shrinkage family: ridge, double or triple")
                        ->check(CLI::IsMember({"ridge", "double", "triple"}));
  f->sv_opt = app->add_flag("--sv,!--no-sv", f->sv, "stochastic-volatility observation errors");

  const auto track_double = [&](const char* name, const char* key, double* slot,
                                const char* help) {
    f->tracked.push_back({app->add_option(name, *slot, help), key,
                          [slot] { return fmt_num(*slot); }});
  };
  const auto track_bool = [&](const char* name, const char* key, bool* slot, const char* help) {
    f->tracked.push_back({app->add_flag(name, *slot, help), key,
                          [slot] { return std::string(*slot ? "true" : "false"); }});
  };
  const auto track_int = [&](const char* name, const char* key, std::int64_t* slot,
                             const char* help) {
    f->tracked.push_back({app->add_option(name, *slot, help), key,
                          [slot] { return std::to_string(*slot); }});
  };

  track_double("--a-xi", "a_xi", &f->a_xi, "pole parameter of the innovation-variance prior");
  track_double("--a-tau", "a_tau", &f->a_tau, "pole parameter of the coefficient-mean prior");
  track_double("--c-xi", "c_xi", &f->c_xi, "tail parameter of the innovation-variance prior");
  track_double("--c-tau", "c_tau", &f->c_tau, "tail parameter of the coefficient-mean prior");
  track_double("--kappa2-b", "kappa2_B", &f->kappa2_B, "global innovation-variance shrinkage");
  track_double("--lambda2-b", "lambda2_B", &f->lambda2_B, "global coefficient-mean shrinkage");
  track_bool("--learn-a-xi,!--no-learn-a-xi", "learn_a_xi", &f->learn_a_xi,
             "sample a_xi instead of fixing it");
  track_bool("--learn-a-tau,!--no-learn-a-tau", "learn_a_tau", &f->learn_a_tau,
             "sample a_tau instead of fixing it");
  track_bool("--learn-c-xi,!--no-learn-c-xi", "learn_c_xi", &f->learn_c_xi,
             "sample c_xi instead of fixing it");
  track_bool("--learn-c-tau,!--no-learn-c-tau", "learn_c_tau", &f->learn_c_tau,
             "sample c_tau instead of fixing it");
  track_bool("--learn-kappa2-b,!--no-learn-kappa2-b", "learn_kappa2_B", &f->learn_kappa2_B,
             "sample kappa2_B instead of fixing it");
  track_bool("--learn-lambda2-b,!--no-learn-lambda2-b", "learn_lambda2_B", &f->learn_lambda2_B,
             "sample lambda2_B instead of fixing it");
  track_int("--niter", "niter", &f->niter, "total sweeps");
  track_int("--nburn", "nburn", &f->nburn, "burn-in sweeps (default niter/2)");
  track_int("--nthin", "nthin", &f->nthin, "keep every nthin-th sweep");
  f->tracked.push_back({app->add_option("--seed", f->seed, "random seed"), "seed",
                        [f] { return std::to_string(f->seed); }});

  app->add_option("--set", f->sets, "extra key=value setting (repeatable)")
      ->type_name("KEY=VALUE");
}

OptionsPtr build_options(const ModelFlags& f) {
  std::vector<KvEntry> file_entries;
  if (!f.config_path.empty()) {
    file_entries = read_kv_file(f.config_path);
    for (const auto& e : file_entries)
      if (!e.section.empty())
        throw std::runtime_error(f.config_path + ": sections are not allowed here (found [" +
                                 e.section + "])");
  }

  // the variant comes from the file unless given explicitly on the line
  std::string family = f.mod_type;
  bool sv = f.sv;
  for (const auto& e : file_entries) {
    if (e.key == "mod_type" && (!f.mod_type_opt || f.mod_type_opt->count() == 0)) family = e.value;
    if (e.key == "sv" && (!f.sv_opt || f.sv_opt->count() == 0)) {
      if (e.value != "true" && e.value != "false" && e.value != "0" && e.value != "1")
        throw std::runtime_error("invalid value '" + e.value + "' for key 'sv'");
      sv = (e.value == "true" || e.value == "1");
    }
  }

  tvpreg_options* raw = nullptr;
  check(tvpreg_options_new(family.c_str(), sv ? 1 : 0, &raw), "options");
  OptionsPtr opts(raw);

  for (const auto& e : file_entries) {
    if (e.key == "mod_type" || e.key == "sv") continue;
    check(tvpreg_options_set(opts.get(), e.key.c_str(), e.value.c_str()),
          ("config '" + e.key + "'").c_str());
  }
  for (const auto& t : f.tracked) {
    if (t.opt->count() == 0) continue;
    check(tvpreg_options_set(opts.get(), t.key.c_str(), t.value().c_str()),
          ("flag '" + t.key + "'").c_str());
  }
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--set expects KEY=VALUE, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    if (key == "mod_type" || key == "sv")
      throw std::runtime_error("choose the model variant with --mod-type/--sv, not --set");
    check(tvpreg_options_set(opts.get(), key.c_str(), s.substr(eq + 1).c_str()),
          ("--set '" + key + "'").c_str());
  }
  return opts;
}

void add_data_flags(CLI::App* app, DataFlags* f, bool required) {
  CLI::Option* data = app->add_option("--data", f->path, "input CSV with a header row");
  if (required) data->required();
  app->add_option("--response", f->response, "response column name");
  app->add_option("--covariates", f->covariates,
                  "covariate column names (default: every other column)");
  app->add_flag("--intercept,!--no-intercept", f->intercept,
                "prepend an all-ones Intercept column");
}

LoadedData load_data_csv(const std::string& path, const std::string& response,
                         const std::vector<std::string>& covariates, bool intercept) {
  const CsvTable table = read_csv_file(path);
  const int ycol = table.col(response);
  if (ycol < 0)
    throw std::runtime_error(path + ": no column named '" + response + "'");

  std::vector<int> xcols;
  std::vector<std::string> names;
  if (covariates.empty()) {
    for (std::size_t j = 0; j < table.header.size(); ++j)
      if (static_cast<int>(j) != ycol) {
        xcols.push_back(static_cast<int>(j));
        names.push_back(table.header[j]);
      }
  } else {
    for (const std::string& name : covariates) {
      const int c = table.col(name);
      if (c < 0) throw std::runtime_error(path + ": no column named '" + name + "'");
      xcols.push_back(c);
      names.push_back(name);
    }
  }
  if (intercept) {
    xcols.insert(xcols.begin(), -1);
    names.insert(names.begin(), "Intercept");
  }
  if (xcols.empty()) throw std::runtime_error(path + ": no covariate columns selected");

  const auto num = [&](std::size_t row, int col) {
    const std::string& cell = table.rows[row][col];
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size())
      throw std::runtime_error(path + ": row " + std::to_string(row + 2) + " column '" +
                               table.header[col] + "': not a number: '" + cell + "'");
    return v;
  };

  LoadedData out;
  out.T = static_cast<int>(table.rows.size());
  out.d = static_cast<int>(xcols.size());
  out.names = std::move(names);
  out.y.resize(out.T);
  out.X.resize(static_cast<std::size_t>(out.T) * out.d);
  for (int t = 0; t < out.T; ++t) {
    out.y[t] = num(t, ycol);
    for (int j = 0; j < out.d; ++j)
      out.X[static_cast<std::size_t>(t) * out.d + j] = xcols[j] < 0 ? 1.0 : num(t, xcols[j]);
  }
  return out;
}

LoadedData load_data(const DataFlags& f) {
  return load_data_csv(f.path, f.response, f.covariates, f.intercept);
}

DataPtr make_data_handle(const LoadedData& data) {
  std::vector<const char*> names;
  for (const auto& n : data.names) names.push_back(n.c_str());
  tvpreg_data* raw = nullptr;
  check(tvpreg_data_new(data.T, data.d, data.y.data(), data.X.data(), names.data(), &raw),
        "data");
  return DataPtr(raw);
}

void write_data_csv(const std::string& path, const LoadedData& data) {
  CsvWriter w(path);
  std::vector<std::string> header = {"y"};
  header.insert(header.end(), data.names.begin(), data.names.end());
  w.write_row(header);
  std::vector<double> row(1 + data.d);
  for (int t = 0; t < data.T; ++t) {
    row[0] = data.y[t];
    for (int j = 0; j < data.d; ++j) row[1 + j] = data.X[static_cast<std::size_t>(t) * data.d + j];
    w.write_numeric_row(row.data(), static_cast<int>(row.size()));
  }
  w.close();
}

nlohmann::json fit_config_json(const tvpreg_fit* fit) {
  nlohmann::json j = nlohmann::json::object();
  const int n = tvpreg_fit_num_config_entries(fit);
  for (int i = 0; i < n; ++i) {
    const char *key = nullptr, *value = nullptr;
    check(tvpreg_fit_config_entry(fit, i, &key, &value), "config entry");
    j[key] = value;
  }
  return j;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for digesting");
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string item = s.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size())
      throw std::runtime_error(std::string(what) + ": not a number: '" + item + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace cli
