// Copyright 2026 The sagd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sagd/sagd.h"

#include <iostream>
#include <memory>
#include <string>
#include <utility>

#include "sagd/commands.hpp"
#include "sagd/config.hpp"
#include "sagd/error.hpp"
#include "sagd/langevin.hpp"
#include "sagd/metrics.hpp"
#include "sagd/potentials.hpp"

struct sagd_config {
  sagd::KeyValueConfig cfg;
};

struct sagd_potential {
  sagd::PotentialPtr pot;
};

struct sagd_chain {
  sagd::PotentialPtr pot;
  sagd::LangevinConfig cfg;
  sagd::ChainState state;
  sagd::RngStream rng;
};

namespace {

thread_local std::string last_error;

sagd_status fail(sagd_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename F>
sagd_status guarded(F&& fn) {
  try {
    fn();
    last_error.clear();
    return SAGD_OK;
  } catch (const sagd::ConfigError& e) {
    return fail(SAGD_CONFIG_ERROR, e.what());
  } catch (const sagd::DivergenceError& e) {
    return fail(SAGD_DIVERGENCE, e.what());
  } catch (const sagd::IoError& e) {
    return fail(SAGD_IO_ERROR, e.what());
  } catch (const sagd::DomainError& e) {
    return fail(SAGD_DOMAIN_ERROR, e.what());
  } catch (const sagd::DimensionError& e) {
    return fail(SAGD_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(SAGD_ERROR, e.what());
  } catch (...) {
    return fail(SAGD_ERROR, "unknown error");
  }
}

#define SAGD_REQUIRE(cond)                                                  \
  do {                                                                      \
    if (!(cond)) {                                                          \
      return fail(SAGD_INVALID_ARGUMENT, "invalid argument: " #cond);       \
    }                                                                       \
  } while (0)

}  // namespace

extern "C" {

const char* sagd_version(void) { return "1.0.0"; }

const char* sagd_last_error(void) { return last_error.c_str(); }

sagd_status sagd_config_create(sagd_config** out) {
  SAGD_REQUIRE(out != nullptr);
  return guarded([&] { *out = new sagd_config{}; });
}

sagd_status sagd_config_load(const char* path, sagd_config** out) {
  SAGD_REQUIRE(path != nullptr && out != nullptr);
  return guarded([&] {
    auto cfg = std::make_unique<sagd_config>();
    cfg->cfg = sagd::KeyValueConfig::load(path);
    *out = cfg.release();
  });
}

sagd_status sagd_config_parse(const char* text, sagd_config** out) {
  SAGD_REQUIRE(text != nullptr && out != nullptr);
  return guarded([&] {
    auto cfg = std::make_unique<sagd_config>();
    cfg->cfg = sagd::KeyValueConfig::parse(text);
    *out = cfg.release();
  });
}

sagd_status sagd_config_set(sagd_config* cfg, const char* key, const char* value) {
  SAGD_REQUIRE(cfg != nullptr && key != nullptr && value != nullptr);
  return guarded([&] { cfg->cfg.set(key, value); });
}

void sagd_config_destroy(sagd_config* cfg) { delete cfg; }

size_t sagd_command_count(void) { return sagd::command_specs().size(); }

const char* sagd_command_name(size_t index) {
  const auto& specs = sagd::command_specs();
  return index < specs.size() ? specs[index].name.c_str() : nullptr;
}

const char* sagd_command_summary(const char* name) {
  if (name == nullptr) {
    return nullptr;
  }
  const sagd::CommandSpec* spec = sagd::find_command(name);
  return spec != nullptr ? spec->summary.c_str() : nullptr;
}

const char* sagd_command_help(const char* name) {
  if (name == nullptr) {
    return nullptr;
  }
  static thread_local std::string help;
  const sagd::CommandSpec* spec = sagd::find_command(name);
  if (spec == nullptr) {
    return nullptr;
  }
  help = sagd::command_help(*spec);
  return help.c_str();
}

sagd_status sagd_command_run(const char* name, const sagd_config* cfg,
                             uint64_t seed, const char* out_path,
                             unsigned threads) {
  SAGD_REQUIRE(name != nullptr && out_path != nullptr);
  return guarded([&] {
    sagd::RunOptions opts;
    opts.seed = seed;
    opts.out_path = out_path;
    opts.threads = threads;
    opts.warnings = &std::cerr;
    const sagd::KeyValueConfig empty;
    sagd::run_command(name, cfg != nullptr ? cfg->cfg : empty, opts);
  });
}

sagd_status sagd_log_gamma(double s, double* out) {
  SAGD_REQUIRE(out != nullptr);
  return guarded([&] { *out = sagd::log_gamma(s); });
}

sagd_status sagd_digamma(double s, double* out) {
  SAGD_REQUIRE(out != nullptr);
  return guarded([&] { *out = sagd::digamma(s); });
}

sagd_status sagd_step_size_bound(double gamma, double nu, double beta, double* out) {
  SAGD_REQUIRE(out != nullptr);
  return guarded([&] {
    sagd::StabilityConstants c;
    c.gamma = gamma;
    c.nu = nu;
    c.beta = beta;
    *out = sagd::step_size_bound(c);
  });
}

sagd_status sagd_potential_gaussian(const double* mean, size_t dim,
                                    sagd_potential** out) {
  SAGD_REQUIRE(out != nullptr);
  return guarded([&] {
    sagd::Vector m;
    if (mean != nullptr) {
      m.assign(mean, mean + dim);
    }
    *out = new sagd_potential{sagd::gaussian_potential(m, dim)};
  });
}

sagd_status sagd_potential_gamma_latent(const double* data, size_t n, double a,
                                        double b, sagd_potential** out) {
  SAGD_REQUIRE(data != nullptr && out != nullptr);
  return guarded([&] {
    *out = new sagd_potential{
        sagd::gamma_latent_posterior(sagd::Vector(data, data + n), a, b)};
  });
}

size_t sagd_potential_dim(const sagd_potential* pot) {
  return pot != nullptr ? pot->pot->dim() : 0;
}

sagd_status sagd_potential_value(const sagd_potential* pot, const double* xi,
                                 double* out) {
  SAGD_REQUIRE(pot != nullptr && xi != nullptr && out != nullptr);
  return guarded([&] { *out = pot->pot->value({xi, pot->pot->dim()}); });
}

sagd_status sagd_potential_gradient(const sagd_potential* pot, const double* xi,
                                    double* out) {
  SAGD_REQUIRE(pot != nullptr && xi != nullptr && out != nullptr);
  return guarded([&] {
    const std::size_t r = pot->pot->dim();
    pot->pot->gradient(std::span<const double>(xi, r), std::span<double>(out, r));
  });
}

void sagd_potential_destroy(sagd_potential* pot) { delete pot; }

sagd_status sagd_chain_create(const sagd_potential* pot, double gamma,
                              double delta, uint64_t seed, uint64_t stream,
                              const double* xi0, const double* rho0,
                              sagd_chain** out) {
  SAGD_REQUIRE(pot != nullptr && xi0 != nullptr && out != nullptr);
  return guarded([&] {
    const std::size_t r = pot->pot->dim();
    sagd::LangevinConfig cfg;
    cfg.gamma = gamma;
    cfg.delta = delta;
    cfg.validate();
    sagd::ChainState state = sagd::ChainState::at(sagd::Vector(xi0, xi0 + r));
    if (rho0 != nullptr) {
      state.rho.assign(rho0, rho0 + r);
    }
    state.validate();
    *out = new sagd_chain{pot->pot, cfg, std::move(state), sagd::RngStream(seed, stream)};
  });
}

sagd_status sagd_chain_run(sagd_chain* chain, size_t steps, size_t burn_in,
                           double* mean_xi) {
  SAGD_REQUIRE(chain != nullptr && steps >= 1);
  return guarded([&] {
    sagd::LangevinConfig cfg = chain->cfg;
    cfg.steps = steps;
    cfg.burn_in = burn_in;
    const std::size_t r = chain->pot->dim();
    sagd::Vector sum(r, 0.0);
    chain->state = sagd::run_chain(*chain->pot, cfg, chain->state, chain->rng,
                                   [&](const sagd::ChainState& s) {
                                     for (std::size_t i = 0; i < r; ++i) {
                                       sum[i] += s.xi[i];
                                     }
                                   });
    if (mean_xi != nullptr) {
      for (std::size_t i = 0; i < r; ++i) {
        mean_xi[i] = sum[i] / static_cast<double>(steps);
      }
    }
  });
}

sagd_status sagd_chain_state(const sagd_chain* chain, double* xi, double* rho,
                             uint64_t* step_count) {
  SAGD_REQUIRE(chain != nullptr);
  return guarded([&] {
    if (xi != nullptr) {
      std::copy(chain->state.xi.begin(), chain->state.xi.end(), xi);
    }
    if (rho != nullptr) {
      std::copy(chain->state.rho.begin(), chain->state.rho.end(), rho);
    }
    if (step_count != nullptr) {
      *step_count = chain->state.step_count;
    }
  });
}

void sagd_chain_destroy(sagd_chain* chain) { delete chain; }

sagd_status sagd_ks_samples(const double* a, size_t na, const double* b,
                            size_t nb, double* out) {
  SAGD_REQUIRE(a != nullptr && b != nullptr && out != nullptr);
  return guarded([&] {
    *out = sagd::ks_distance(sagd::Cdf1D::empirical(sagd::Vector(a, a + na)),
                             sagd::Cdf1D::empirical(sagd::Vector(b, b + nb)));
  });
}

sagd_status sagd_w1_samples(const double* a, size_t na, const double* b,
                            size_t nb, double* out) {
  SAGD_REQUIRE(a != nullptr && b != nullptr && out != nullptr);
  return guarded([&] {
    *out = sagd::wasserstein1(sagd::Cdf1D::empirical(sagd::Vector(a, a + na)),
                              sagd::Cdf1D::empirical(sagd::Vector(b, b + nb)));
  });
}

sagd_status sagd_distance_to_latent(const double* sample, size_t n,
                                    const char* latent, double* ks, double* w1) {
  SAGD_REQUIRE(sample != nullptr && latent != nullptr);
  return guarded([&] {
    const sagd::Cdf1D truth = sagd::named_latent(latent);
    const sagd::Cdf1D fitted = sagd::Cdf1D::empirical(sagd::Vector(sample, sample + n));
    if (ks != nullptr) {
      *ks = sagd::ks_distance(fitted, truth);
    }
    if (w1 != nullptr) {
      *w1 = sagd::wasserstein1(fitted, truth);
    }
  });
}

}  // extern "C"
