#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "commands.hpp"
#include "common.hpp"
#include "csv.hpp"
#include "kvfile.hpp"

namespace cli {

namespace {

constexpr int kMinWindow = 30;  // smallest training window worth fitting

struct SpecDef {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
};

struct BacktestArgs {
  DataFlags data;
  std::string specs_path;
  int t0 = kMinWindow;
  int tmax = 0;  // 0: resolved to the second-to-last row
  int jobs = 0;  // 0: TVPREG_JOBS or 1
  std::uint64_t seed_base = 1000;
  std::string out_dir;
  std::int64_t niter = 30000, nburn = 15000, nthin = 5;  // per-origin chain defaults
};

struct JobResult {
  double lpds = 0.0;
  bool failed = false;
  std::string error;
};

LoadedData slice_rows(const LoadedData& in, int count) {
  LoadedData out;
  out.T = count;
  out.d = in.d;
  out.names = in.names;
  out.y.assign(in.y.begin(), in.y.begin() + count);
  out.X.assign(in.X.begin(), in.X.begin() + static_cast<std::size_t>(count) * in.d);
  return out;
}

std::vector<SpecDef> parse_specs(const std::string& path, const BacktestArgs& a) {
  std::vector<SpecDef> specs;
  std::vector<std::pair<std::string, std::string>> shared;
  if (path.empty()) {
    specs.push_back({"default", {}});
  } else {
    const std::vector<KvEntry> entries = read_kv_file(path);
    for (const auto& name : kv_sections(entries)) {
      if (name.empty()) continue;
      specs.push_back({name, {}});
    }
    if (specs.empty()) specs.push_back({"default", {}});
    for (const auto& e : entries) {
      if (e.key == "seed")
        throw std::runtime_error(path + ": per-spec seeds are derived from --seed-base");
      if (e.section.empty()) {
        shared.emplace_back(e.key, e.value);  // top-level entries apply to every spec
      } else {
        for (auto& s : specs)
          if (s.name == e.section) s.entries.emplace_back(e.key, e.value);
      }
    }
  }
  for (auto& s : specs) {
    std::vector<std::pair<std::string, std::string>> resolved = {
        {"niter", std::to_string(a.niter)},
        {"nburn", std::to_string(a.nburn)},
        {"nthin", std::to_string(a.nthin)},
    };
    resolved.insert(resolved.end(), shared.begin(), shared.end());
    resolved.insert(resolved.end(), s.entries.begin(), s.entries.end());
    s.entries = std::move(resolved);
  }
  return specs;
}

OptionsPtr build_spec_options(const SpecDef& spec, std::uint64_t seed) {
  std::string family = "double";
  bool sv = false;
  for (const auto& [key, value] : spec.entries) {
    if (key == "mod_type") family = value;
    if (key == "sv") sv = (value == "true" || value == "1");
  }
  tvpreg_options* raw = nullptr;
  check(tvpreg_options_new(family.c_str(), sv ? 1 : 0, &raw),
        ("spec '" + spec.name + "'").c_str());
  OptionsPtr opts(raw);
  for (const auto& [key, value] : spec.entries) {
    if (key == "mod_type" || key == "sv") continue;
    check(tvpreg_options_set(opts.get(), key.c_str(), value.c_str()),
          ("spec '" + spec.name + "' key '" + key + "'").c_str());
  }
  check(tvpreg_options_set(opts.get(), "seed", std::to_string(seed).c_str()), "seed");
  return opts;
}

JobResult run_job(const LoadedData& all, const SpecDef& spec, int origin,
                  std::uint64_t seed_base) {
  JobResult r;
  try {
    const LoadedData train = slice_rows(all, origin);
    const DataPtr data = make_data_handle(train);
    const OptionsPtr opts = build_spec_options(spec, seed_base + static_cast<std::uint64_t>(origin));
    tvpreg_fit* raw = nullptr;
    check(tvpreg_fit_run(data.get(), opts.get(), &raw), "fit");
    const FitPtr fit(raw);
    check(tvpreg_lpds(fit.get(), data.get(),
                      all.X.data() + static_cast<std::size_t>(origin) * all.d, all.y[origin],
                      &r.lpds),
          "lpds");
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
  }
  return r;
}

int resolve_jobs(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("TVPREG_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  return 1;
}

void run(const BacktestArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedData all = load_data(a.data);
  const int tmax = a.tmax > 0 ? a.tmax : all.T - 1;
  if (a.t0 < kMinWindow)
    throw std::runtime_error("--t0 must be at least " + std::to_string(kMinWindow) +
                             " observations");
  if (tmax < a.t0) throw std::runtime_error("--tmax must not precede --t0");
  if (tmax > all.T - 1)
    throw std::runtime_error("--tmax leaves no row to score (need tmax < number of rows)");

  const std::vector<SpecDef> specs = parse_specs(a.specs_path, a);
  const int norigins = tmax - a.t0 + 1;
  const int nspecs = static_cast<int>(specs.size());
  const int njobs = norigins * nspecs;

  // slot-per-job results make the merge independent of scheduling
  std::vector<JobResult> results(njobs);
  std::atomic<int> next{0};
  const int nworkers = std::min(resolve_jobs(a.jobs), njobs);
  const auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= njobs) return;
      const int origin = a.t0 + i / nspecs;
      const SpecDef& spec = specs[i % nspecs];
      results[i] = run_job(all, spec, origin, a.seed_base);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < nworkers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  const auto in_dir = [&](const std::string& name) {
    return (fs::path(a.out_dir) / name).string();
  };

  CsvWriter longf(in_dir("lpds_long.csv"));
  longf.write_row({"origin", "spec", "lpds", "error"});
  for (int i = 0; i < njobs; ++i) {
    const int origin = a.t0 + i / nspecs;
    const JobResult& r = results[i];
    longf.write_row({std::to_string(origin), specs[i % nspecs].name,
                     r.failed ? "" : fmt_num(r.lpds), r.error});
  }
  longf.close();

  CsvWriter cum(in_dir("lpds_cumulative.csv"));
  std::vector<std::string> header = {"origin"};
  for (const auto& s : specs) header.push_back(s.name);
  cum.write_row(header);
  std::vector<double> sums(nspecs, 0.0);
  for (int o = 0; o < norigins; ++o) {
    std::vector<std::string> row = {std::to_string(a.t0 + o)};
    for (int s = 0; s < nspecs; ++s) {
      const JobResult& r = results[o * nspecs + s];
      if (!r.failed) sums[s] += r.lpds;  // failures contribute nothing
      row.push_back(fmt_num(sums[s]));
    }
    cum.write_row(row);
  }
  cum.close();

  nlohmann::json spec_json = nlohmann::json::object();
  for (const auto& s : specs) {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [k, v] : s.entries) entries[k] = v;
    spec_json[s.name] = entries;
  }
  nlohmann::json failures = nlohmann::json::array();
  int nfailed = 0;
  for (int i = 0; i < njobs; ++i)
    if (results[i].failed) {
      ++nfailed;
      failures.push_back({{"origin", a.t0 + i / nspecs},
                          {"spec", specs[i % nspecs].name},
                          {"error", results[i].error}});
    }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json_file(in_dir("manifest.json"),
                  {{"command", "backtest"},
                   {"version", tvpreg_version()},
                   {"inputs", {{a.data.path, file_digest(a.data.path)}}},
                   {"t0", a.t0},
                   {"tmax", tmax},
                   {"seed_base", a.seed_base},
                   {"specs", spec_json},
                   {"failures", failures},
                   {"duration_seconds", seconds}});

  std::printf("wrote %s: %d origins x %d specs, %d failed, %.2f s\n", a.out_dir.c_str(),
              norigins, nspecs, nfailed, seconds);
}

}  // namespace

void register_cmd_backtest(CLI::App& app) {
  auto args = std::make_shared<BacktestArgs>();
  CLI::App* cmd = app.add_subcommand(
      "backtest", "rolling-origin one-step-ahead LPDS comparison of prior configurations");
  add_data_flags(cmd, &args->data);
  cmd->add_option("--specs", args->specs_path,
                  "config file with one [section] per named prior spec");
  cmd->add_option("--t0", args->t0, "first training-window length");
  cmd->add_option("--tmax", args->tmax, "last training-window length (default: rows - 1)");
  cmd->add_option("--jobs", args->jobs, "parallel workers (default: TVPREG_JOBS or 1)");
  cmd->add_option("--seed-base", args->seed_base, "seed for origin t is seed-base + t");
  cmd->add_option("--niter", args->niter, "per-origin sweeps unless a spec overrides");
  cmd->add_option("--nburn", args->nburn, "per-origin burn-in unless a spec overrides");
  cmd->add_option("--nthin", args->nthin, "per-origin thinning unless a spec overrides");
  cmd->add_option("--out-dir", args->out_dir, "directory for the LPDS tables")->required();
  cmd->callback([args] { run(*args); });
}

}  // namespace cli
