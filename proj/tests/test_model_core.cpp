#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tvpreg/types.hpp"

using namespace tvpreg;

namespace {

TimeSeriesData small_data(int T = 40, int d = 2) {
  TimeSeriesData data;
  data.y.resize(T);
  data.X.resize(T, d);
  for (int t = 0; t < T; ++t) {
    data.y[t] = std::sin(0.3 * t);
    for (int j = 0; j < d; ++j) data.X(t, j) = std::cos(0.1 * t * (j + 1));
  }
  data.names.resize(d);
  for (int j = 0; j < d; ++j) data.names[j] = "x" + std::to_string(j + 1);
  return data;
}

bool has_msg_containing(const std::vector<std::string>& msgs, const std::string& needle) {
  return std::any_of(msgs.begin(), msgs.end(), [&](const std::string& m) {
    return m.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_SUITE_BEGIN("model_core");

TEST_CASE("shrinkage family defaults") {
  SUBCASE("triple learns all shape and global parameters") {
    const PriorSpec p = default_prior_spec(ModType::Triple);
    CHECK(p.learn_a_xi);
    CHECK(p.learn_a_tau);
    CHECK(p.learn_c_xi);
    CHECK(p.learn_c_tau);
    CHECK(p.learn_kappa2_B);
    CHECK(p.learn_lambda2_B);
    CHECK(p.a_xi == doctest::Approx(0.1));
    CHECK(p.c_xi == doctest::Approx(0.1));
    CHECK(p.kappa2_B == doctest::Approx(20.0));
  }
  SUBCASE("double learns shapes and globals but has no second shape") {
    const PriorSpec p = default_prior_spec(ModType::Double);
    CHECK(p.learn_a_xi);
    CHECK(p.learn_a_tau);
    CHECK_FALSE(p.learn_c_xi);
    CHECK_FALSE(p.learn_c_tau);
    CHECK(p.learn_kappa2_B);
    CHECK(p.learn_lambda2_B);
    CHECK(p.d1 == doctest::Approx(0.001));
    CHECK(p.e2 == doctest::Approx(0.001));
  }
  SUBCASE("ridge fixes everything") {
    const PriorSpec p = default_prior_spec(ModType::Ridge);
    CHECK_FALSE(p.learn_a_xi);
    CHECK_FALSE(p.learn_kappa2_B);
    CHECK_FALSE(p.learn_lambda2_B);
    CHECK(p.kappa2_B == doctest::Approx(20.0));
    CHECK(p.lambda2_B == doctest::Approx(20.0));
  }
  SUBCASE("common error variance hyperparameters") {
    const PriorSpec p = default_prior_spec(ModType::Triple);
    CHECK(p.c0 == doctest::Approx(2.5));
    CHECK(p.g0 == doctest::Approx(5.0));
    CHECK(p.G0 == doctest::Approx(5.0 / 1.5));
    CHECK(p.b_mu == doctest::Approx(0.0));
    CHECK(p.B_mu == doctest::Approx(1.0));
    CHECK(p.a_phi == doctest::Approx(5.0));
    CHECK(p.b_phi == doctest::Approx(1.5));
    CHECK(p.B_sigma == doctest::Approx(1.0));
  }
}

TEST_CASE("validate fills in the burn-in default") {
  const PriorSpec p = default_prior_spec(ModType::Double);
  MCMCConfig cfg;
  cfg.niter = 9001;
  cfg.nburn = -1;
  const ValidationResult vr = validate(small_data(), p, cfg);
  CHECK(vr.ok);
  CHECK(vr.cfg.nburn == 4501);  // round(0.5 * 9001)
}

TEST_CASE("validate rejects bad chain settings") {
  const PriorSpec p = default_prior_spec(ModType::Double);
  SUBCASE("nburn >= niter") {
    MCMCConfig cfg;
    cfg.niter = 100;
    cfg.nburn = 100;
    const ValidationResult vr = validate(small_data(), p, cfg);
    CHECK_FALSE(vr.ok);
    CHECK(has_msg_containing(vr.errors, "nburn"));
  }
  SUBCASE("non-positive thinning") {
    MCMCConfig cfg;
    cfg.nthin = 0;
    const ValidationResult vr = validate(small_data(), p, cfg);
    CHECK(has_msg_containing(vr.errors, "nthin"));
  }
  SUBCASE("thinning coarser than the kept run") {
    MCMCConfig cfg;
    cfg.niter = 100;
    cfg.nburn = 95;
    cfg.nthin = 10;
    const ValidationResult vr = validate(small_data(), p, cfg);
    CHECK(has_msg_containing(vr.errors, "stored"));
  }
  SUBCASE("non-positive niter") {
    MCMCConfig cfg;
    cfg.niter = 0;
    cfg.nburn = -1;
    const ValidationResult vr = validate(small_data(), p, cfg);
    CHECK(has_msg_containing(vr.errors, "niter"));
  }
}

TEST_CASE("validate rejects broken data") {
  const PriorSpec p = default_prior_spec(ModType::Double);
  const MCMCConfig cfg;
  SUBCASE("too short") {
    TimeSeriesData data = small_data(1, 1);
    CHECK_FALSE(validate(data, p, cfg).ok);
  }
  SUBCASE("non-finite response") {
    TimeSeriesData data = small_data();
    data.y[3] = std::nan("");
    CHECK(has_msg_containing(validate(data, p, cfg).errors, "y"));
  }
  SUBCASE("non-finite covariate") {
    TimeSeriesData data = small_data();
    data.X(5, 1) = std::numeric_limits<double>::infinity();
    CHECK(has_msg_containing(validate(data, p, cfg).errors, "X"));
  }
  SUBCASE("label count mismatch") {
    TimeSeriesData data = small_data();
    data.names.pop_back();
    CHECK(has_msg_containing(validate(data, p, cfg).errors, "label"));
  }
}

TEST_CASE("validate rejects non-positive hyperparameters") {
  const MCMCConfig cfg;
  SUBCASE("shape") {
    PriorSpec p = default_prior_spec(ModType::Double);
    p.a_xi = 0.0;
    CHECK(has_msg_containing(validate(small_data(), p, cfg).errors, "a_xi"));
  }
  SUBCASE("global scale") {
    PriorSpec p = default_prior_spec(ModType::Ridge);
    p.kappa2_B = -1.0;
    CHECK(has_msg_containing(validate(small_data(), p, cfg).errors, "kappa2_B"));
  }
  SUBCASE("variance prior") {
    PriorSpec p = default_prior_spec(ModType::Double);
    p.c0 = 0.0;
    CHECK(has_msg_containing(validate(small_data(), p, cfg).errors, "c0"));
  }
  SUBCASE("sv scale") {
    PriorSpec p = default_prior_spec(ModType::Double, true);
    p.B_sigma = 0.0;
    CHECK(has_msg_containing(validate(small_data(), p, cfg).errors, "B_sigma"));
  }
  SUBCASE("mh tuning") {
    PriorSpec p = default_prior_spec(ModType::Triple);
    p.mh_a_xi.batch_size = 0;
    CHECK(has_msg_containing(validate(small_data(), p, cfg).errors, "batch_size"));
    p = default_prior_spec(ModType::Triple);
    p.mh_a_xi.target_rate = 1.5;
    CHECK(has_msg_containing(validate(small_data(), p, cfg).errors, "target_rate"));
  }
}

TEST_CASE("validate forces family-inconsistent learn flags off with a warning") {
  const MCMCConfig cfg;
  SUBCASE("ridge cannot learn its globals") {
    PriorSpec p = default_prior_spec(ModType::Ridge);
    p.learn_kappa2_B = true;
    const ValidationResult vr = validate(small_data(), p, cfg);
    CHECK(vr.ok);
    CHECK(has_msg_containing(vr.warnings, "ridge"));
    CHECK_FALSE(vr.spec.learn_kappa2_B);
  }
  SUBCASE("double has no second shape parameter") {
    PriorSpec p = default_prior_spec(ModType::Double);
    p.learn_c_xi = true;
    const ValidationResult vr = validate(small_data(), p, cfg);
    CHECK(vr.ok);
    CHECK(has_msg_containing(vr.warnings, "c_xi"));
    CHECK_FALSE(vr.spec.learn_c_xi);
  }
}

TEST_CASE("key-value serialization round-trips") {
  PriorSpec p = default_prior_spec(ModType::Triple);
  MCMCConfig cfg;
  p.a_xi = 0.037;
  p.learn_c_tau = false;
  p.mh_a_xi.initial_sd = 0.25;
  p.mh_a_xi.batch_size = 64;
  cfg.niter = 4242;
  cfg.seed = 99;
  cfg.stream = 7;

  const auto kvs = to_key_values(p, cfg);
  PriorSpec p2 = default_prior_spec(ModType::Ridge);  // deliberately different start
  MCMCConfig cfg2;
  std::string err;
  for (const auto& [k, v] : kvs) REQUIRE_MESSAGE(apply_key_value(p2, cfg2, k, v, &err), err);

  const auto kvs2 = to_key_values(p2, cfg2);
  REQUIRE(kvs.size() == kvs2.size());
  for (size_t i = 0; i < kvs.size(); ++i) {
    CHECK(kvs[i].first == kvs2[i].first);
    CHECK(kvs[i].second == kvs2[i].second);
  }
  CHECK(p2.mod_type == ModType::Triple);
  CHECK(p2.a_xi == doctest::Approx(0.037));
  CHECK_FALSE(p2.learn_c_tau);
  CHECK(p2.mh_a_xi.initial_sd == doctest::Approx(0.25));
  CHECK(p2.mh_a_xi.batch_size == 64);
  CHECK(cfg2.niter == 4242);
  CHECK(cfg2.seed == 99);
  CHECK(cfg2.stream == 7);
}

TEST_CASE("key-value parsing is strict") {
  PriorSpec p = default_prior_spec(ModType::Double);
  MCMCConfig cfg;
  std::string err;
  CHECK_FALSE(apply_key_value(p, cfg, "no_such_key", "1", &err));
  CHECK(err.find("no_such_key") != std::string::npos);
  CHECK_FALSE(apply_key_value(p, cfg, "a_xi", "abc", &err));
  CHECK_FALSE(apply_key_value(p, cfg, "a_xi", "1.5x", &err));
  CHECK_FALSE(apply_key_value(p, cfg, "niter", "12.5", &err));
  CHECK_FALSE(apply_key_value(p, cfg, "learn_a_xi", "maybe", &err));
  CHECK_FALSE(apply_key_value(p, cfg, "seed", "-3", &err));
}

TEST_CASE("full-precision doubles survive the round-trip") {
  PriorSpec p = default_prior_spec(ModType::Triple);
  MCMCConfig cfg;
  p.kappa2_B = 0.1 + 0.2;  // not representable tidily
  const auto kvs = to_key_values(p, cfg);
  PriorSpec p2 = default_prior_spec(ModType::Triple);
  MCMCConfig cfg2;
  for (const auto& [k, v] : kvs) apply_key_value(p2, cfg2, k, v, nullptr);
  CHECK(p2.kappa2_B == p.kappa2_B);  // bitwise, thanks to %.17g
}

TEST_CASE("model type names round-trip") {
  for (ModType m : {ModType::Triple, ModType::Double, ModType::Ridge}) {
    ModType back;
    REQUIRE(mod_type_from_string(to_string(m), &back));
    CHECK(back == m);
  }
  ModType dummy;
  CHECK_FALSE(mod_type_from_string("quadruple", &dummy));
}

TEST_SUITE_END();
