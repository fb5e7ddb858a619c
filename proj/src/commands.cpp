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

#include "sagd/commands.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "sagd/csv.hpp"
#include "sagd/em.hpp"
#include "sagd/error.hpp"
#include "sagd/genmodel.hpp"
#include "sagd/langevin.hpp"
#include "sagd/potentials.hpp"
#include "sagd/thread_pool.hpp"

namespace sagd {

namespace {

constexpr std::uint64_t kDataTag = 0x44415441ULL;
constexpr std::uint64_t kInitTag = 0x494e4954ULL;
constexpr std::uint64_t kEvalTag = 0x4556414cULL;

std::vector<std::string> header_fields(const std::string& columns) {
  std::vector<std::string> fields;
  std::stringstream ss(columns);
  std::string item;
  while (std::getline(ss, item, ',')) {
    fields.push_back(item);
  }
  return fields;
}

void warn(const RunOptions& opts, const std::string& message) {
  if (opts.warnings != nullptr) {
    *opts.warnings << "warning: " << message << '\n';
  }
}

std::string sample_columns(std::size_t dim) {
  std::string cols = "row,step";
  for (std::size_t i = 1; i <= dim; ++i) {
    cols += ",xi_" + std::to_string(i);
  }
  for (std::size_t i = 1; i <= dim; ++i) {
    cols += ",rho_" + std::to_string(i);
  }
  return cols + ",sq_xi,sq_rho";
}

// ---------------------------------------------------------------------------
// sample

void run_sample(const ConfigReader& cfg, const RunOptions& opts) {
  const std::string kind = cfg.get_string("potential");
  PotentialPtr pot;
  if (kind == "gaussian") {
    const std::size_t dim = cfg.get_size("dim");
    if (dim < 1) {
      throw ConfigError("sample: dim must be at least 1");
    }
    const std::vector<double> mean = cfg.get_list("mean");
    if (!mean.empty() && mean.size() != dim) {
      throw ConfigError("sample: mean must list dim values");
    }
    pot = gaussian_potential(mean, dim);
  } else if (kind == "gamma_latent") {
    RngStream data_rng(cfg.get_u64("data_seed"), kDataTag);
    const GammaLatentModel model =
        simulate_gamma_data(cfg.get_size("n"), cfg.get_double("true_a"),
                            cfg.get_double("true_b"), data_rng);
    pot = gamma_latent_posterior(model.data, cfg.get_double("a"),
                                 cfg.get_double("b"));
  } else {
    throw ConfigError("sample: unknown potential '" + kind +
                      "' (expected gaussian or gamma_latent)");
  }

  LangevinConfig lc;
  lc.gamma = cfg.get_double("gamma");
  lc.delta = cfg.get_double("delta");
  lc.steps = cfg.get_size("steps");
  lc.burn_in = cfg.get_size("burn_in");
  try {
    lc.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sample: ") + e.what());
  }
  const std::size_t thin = cfg.get_size("thin");
  if (thin < 1) {
    throw ConfigError("sample: thin must be at least 1");
  }

  if (const auto nu = pot->smoothness()) {
    StabilityConstants sc;
    sc.nu = *nu;
    sc.gamma = lc.gamma;
    sc.beta = cfg.get_double("beta");
    const double bound = step_size_bound(sc);
    if (lc.delta > bound) {
      warn(opts, "delta " + format_number(lc.delta) +
                     " exceeds the moment-stability bound " + format_number(bound));
    }
  } else {
    warn(opts, "smoothness constant unknown for this potential; step size "
               "accepted without a stability check");
  }

  const std::size_t r = pot->dim();
  CsvWriter out(opts.out_path);
  out.write_row(header_fields(sample_columns(r)));

  Vector mean_xi(r, 0.0);
  Vector mean_rho(r, 0.0);
  double mean_sq_xi = 0.0;
  double mean_sq_rho = 0.0;
  MomentDiagnostic moments(2);
  std::size_t observed = 0;
  RngStream rng(opts.seed, 0);
  run_chain(*pot, lc, ChainState::at(Vector(r, cfg.get_double("init"))), rng,
            [&](const ChainState& s) {
              ++observed;
              const double sq_xi = squared_norm(s.xi);
              const double sq_rho = squared_norm(s.rho);
              for (std::size_t i = 0; i < r; ++i) {
                mean_xi[i] += s.xi[i];
                mean_rho[i] += s.rho[i];
              }
              mean_sq_xi += sq_xi;
              mean_sq_rho += sq_rho;
              moments.observe(s);
              if (observed % thin != 0) {
                return;
              }
              std::vector<std::string> row{"data", std::to_string(observed)};
              for (double v : s.xi) row.push_back(format_number(v));
              for (double v : s.rho) row.push_back(format_number(v));
              row.push_back(format_number(sq_xi));
              row.push_back(format_number(sq_rho));
              out.write_row(row);
            });
  const double k = static_cast<double>(observed);
  std::vector<std::string> summary{"summary", std::to_string(observed)};
  for (double v : mean_xi) summary.push_back(format_number(v / k));
  for (double v : mean_rho) summary.push_back(format_number(v / k));
  summary.push_back(format_number(mean_sq_xi / k));
  summary.push_back(format_number(mean_sq_rho / k));
  out.write_row(summary);
  out.close();
  if (moments.unstable()) {
    warn(opts, "fourth moment grew more than tenfold between trajectory "
               "halves; the chain may be unstable");
  }
}

// ---------------------------------------------------------------------------
// em-gamma

void run_em_gamma(const ConfigReader& cfg, const RunOptions& opts) {
  RngStream data_rng(cfg.get_u64("data_seed"), kDataTag);
  const GammaLatentModel model =
      simulate_gamma_data(cfg.get_size("n"), cfg.get_double("true_a"),
                          cfg.get_double("true_b"), data_rng);
  const GammaParams theta0{cfg.get_double("a0"), cfg.get_double("b0")};

  EmConfig em;
  em.m_steps = cfg.get_size("m_steps");
  em.inner.iterations = cfg.get_size("inner_steps");
  em.inner.schedule.c1 = cfg.get_double("delta_c1");
  em.inner.schedule.c2 = cfg.get_double("k_c2");
  em.inner.schedule.k_offset = cfg.get_size("k_offset");
  em.inner.schedule.alpha0 = cfg.get_double("alpha");
  em.inner.schedule.constant_alpha = true;
  em.inner.burn_in = cfg.get_size("burn_in");
  em.inner.gamma = cfg.get_double("gamma");
  em.inner.chains = cfg.get_size("chains");
  em.loglik_every = cfg.get_size("loglik_every");
  em.quad.tolerance = cfg.get_double("quad_tolerance");
  if (em.inner.chains < 1) {
    throw ConfigError("em-gamma: chains must be at least 1");
  }

  std::vector<std::pair<std::string, EmMode>> modes;
  for (const std::string& word : cfg.get_words("modes")) {
    if (word == "sagd") {
      modes.emplace_back(word, EmMode::sagd);
    } else if (word == "exact_gd") {
      modes.emplace_back(word, EmMode::exact_gd);
    } else {
      throw ConfigError("em-gamma: unknown mode '" + word + "'");
    }
  }
  if (modes.empty()) {
    throw ConfigError("em-gamma: no modes selected");
  }

  ThreadPool pool(opts.threads);
  std::vector<std::pair<std::string, EmResult>> results;
  for (const auto& [name, mode] : modes) {
    em.mode = mode;
    results.emplace_back(name, em_run(model, theta0, em, opts.seed, &pool));
  }

  CsvWriter out(opts.out_path);
  out.write_row(header_fields("mode,update,m_step,a,b,loglik"));
  for (const auto& [name, res] : results) {
    for (const EmRecord& rec : res.path) {
      out.write_row({name, std::to_string(rec.update), std::to_string(rec.m_step),
                     format_number(rec.theta.a), format_number(rec.theta.b),
                     format_number(rec.loglik)});
    }
  }
  for (const auto& [name, res] : results) {
    const std::size_t last_m = res.path.empty() ? 0 : res.path.back().m_step;
    out.write_row({"final_" + name, std::to_string(res.path.size()),
                   std::to_string(last_m), format_number(res.final_theta.a),
                   format_number(res.final_theta.b),
                   format_number(res.final_loglik)});
  }
  out.close();
}

// ---------------------------------------------------------------------------
// genfit

void run_genfit(const ConfigReader& cfg, const RunOptions& opts) {
  const std::string latent = cfg.get_string("latent");
  const Cdf1D truth = named_latent(latent);
  const std::size_t n = cfg.get_size("n");
  const double noise_var = cfg.get_double("noise_var");
  if (n < 2) {
    throw ConfigError("genfit: n must be at least 2");
  }
  if (!(noise_var > 0.0)) {
    throw ConfigError("genfit: noise_var must be positive");
  }
  RngStream data_rng(cfg.get_u64("data_seed"), kDataTag);
  Vector data(n);
  const double noise_sd = std::sqrt(noise_var);
  for (double& x : data) {
    x = draw_named_latent(latent, data_rng) + noise_sd * data_rng.normal();
  }

  GeneratorFitConfig fit;
  fit.epochs = cfg.get_size("epochs");
  fit.batch = cfg.get_size("batch");
  fit.alpha = cfg.get_double("alpha");
  fit.decay = cfg.get_bool("decay");
  const std::string update = cfg.get_string("update");
  if (update == "adam") {
    fit.update = UpdateRule::adam;
  } else if (update == "plain") {
    fit.update = UpdateRule::plain;
  } else {
    throw ConfigError("genfit: update must be adam or plain");
  }
  fit.adam.beta1 = cfg.get_double("adam_beta1");
  fit.adam.beta2 = cfg.get_double("adam_beta2");
  fit.gamma = cfg.get_double("gamma");
  fit.delta = cfg.get_double("delta");
  fit.chain_steps = cfg.get_size("chain_steps");
  fit.burn_in = cfg.get_size("burn_in");
  fit.noise_var = noise_var;
  fit.probe_size = cfg.get_size("probe_size");
  try {
    fit.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("genfit: ") + e.what());
  }
  const std::size_t eval_samples = cfg.get_size("eval_samples");
  if (eval_samples < 1) {
    throw ConfigError("genfit: eval_samples must be at least 1");
  }

  RngStream init_rng(opts.seed, kInitTag);
  const Mlp1D init = warm_start_generator(data, cfg.get_size("hidden"), noise_var, init_rng);

  struct EpochMetrics {
    std::size_t epoch;
    double ks;
    double w1;
  };
  std::vector<EpochMetrics> metrics;
  Vector last_sample;
  ThreadPool pool(opts.threads);
  const TrainResult trained = train_debiased(
      data, init, fit, opts.seed, &pool, [&](std::size_t epoch, const Mlp1D& net) {
        RngStream eval_rng(opts.seed, derive_stream(kEvalTag, epoch));
        last_sample = sample_generator(net, eval_samples, eval_rng);
        const Cdf1D fitted = Cdf1D::empirical(last_sample);
        metrics.push_back({epoch, ks_distance(fitted, truth), wasserstein1(fitted, truth)});
      });

  CsvWriter out(opts.out_path);
  out.write_row(header_fields("epoch,ks,w1,probe_loglik"));
  for (const EpochMetrics& m : metrics) {
    out.write_row({std::to_string(m.epoch), format_number(m.ks), format_number(m.w1),
                   format_number(trained.probe_loglik[m.epoch])});
  }
  out.close();

  CsvWriter samples(opts.out_path + ".samples.csv");
  samples.write_row({"z"});
  for (double z : last_sample) {
    samples.write_row({format_number(z)});
  }
  samples.close();
}

// ---------------------------------------------------------------------------
// bias-scan

void run_bias_scan(const ConfigReader& cfg, const RunOptions& opts) {
  const std::size_t dim = cfg.get_size("dim");
  if (dim < 1) {
    throw ConfigError("bias-scan: dim must be at least 1");
  }
  const double gamma = cfg.get_double("gamma");
  const std::vector<double> deltas = cfg.get_list("deltas");
  const std::vector<double> steps_list = cfg.get_list("steps");
  const double kdelta = cfg.get_double("kdelta");
  const std::size_t reps = cfg.get_size("reps");
  const double burn_time = cfg.get_double("burn_in_time");
  if (deltas.empty() || reps < 1) {
    throw ConfigError("bias-scan: need at least one delta and one replication");
  }
  if (!steps_list.empty() && steps_list.size() != deltas.size()) {
    throw ConfigError("bias-scan: steps must list one K per delta");
  }

  const PotentialPtr pot = gaussian_potential({}, dim);
  const double truth = static_cast<double>(dim);
  ThreadPool pool(opts.threads);

  CsvWriter out(opts.out_path);
  out.write_row(header_fields("delta,K,bias,mse,reps"));
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    LangevinConfig lc;
    lc.gamma = gamma;
    lc.delta = deltas[j];
    const double raw_k = steps_list.empty() ? kdelta / lc.delta : steps_list[j];
    lc.steps = static_cast<std::size_t>(std::llround(raw_k));
    lc.burn_in = static_cast<std::size_t>(std::ceil(burn_time / lc.delta));
    try {
      lc.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("bias-scan: ") + e.what());
    }
    std::vector<double> estimates(reps);
    pool.parallel_for(reps, [&](std::size_t rep) {
      RngStream rng(opts.seed, derive_stream(j, rep));
      const Vector est = estimate(*pot, lc, ChainState::at(Vector(dim, 0.0)), rng,
                                  [](std::span<const double> xi, std::span<const double>) {
                                    return Vector{squared_norm(xi)};
                                  });
      estimates[rep] = est[0];
    });
    double bias = 0.0;
    double mse = 0.0;
    for (double e : estimates) {
      bias += e - truth;
      mse += (e - truth) * (e - truth);
    }
    bias /= static_cast<double>(reps);
    mse /= static_cast<double>(reps);
    out.write_row({format_number(lc.delta), std::to_string(lc.steps), format_number(bias),
                   format_number(mse), std::to_string(reps)});
  }
  out.close();
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"sample",
       "Run one underdamped Langevin chain on a builtin potential",
       {
           {"potential", "gaussian", "gaussian or gamma_latent"},
           {"dim", "2", "gaussian: dimension"},
           {"mean", "", "gaussian: comma-separated mean (default zeros)"},
           {"n", "100", "gamma_latent: number of simulated observations"},
           {"true_a", "2", "gamma_latent: a used to simulate data"},
           {"true_b", "0.5", "gamma_latent: b used to simulate data"},
           {"a", "2", "gamma_latent: posterior parameter a"},
           {"b", "0.5", "gamma_latent: posterior parameter b"},
           {"data_seed", "1", "gamma_latent: seed of the simulated data"},
           {"gamma", "2", "friction"},
           {"delta", "0.05", "step size; gamma * delta must be below 1"},
           {"steps", "1000", "observed steps K"},
           {"burn_in", "0", "discarded steps before observation"},
           {"thin", "1", "write every thin-th observed state"},
           {"init", "0", "initial value of every position coordinate"},
           {"beta", "0.5", "dissipativity beta used for the step-size check"},
       },
       ""},
      {"em-gamma",
       "EM for the gamma-latent model; SAGD and exact-gradient M-steps",
       {
           {"n", "100", "number of observations"},
           {"true_a", "2", "a used to simulate data"},
           {"true_b", "0.5", "b used to simulate data"},
           {"data_seed", "1", "seed of the simulated data"},
           {"a0", "0", "initial a"},
           {"b0", "1", "initial b"},
           {"alpha", "0.2", "constant gradient step size"},
           {"inner_steps", "100", "gradient updates per M-step"},
           {"m_steps", "3", "number of M-steps"},
           {"delta_c1", "0.1", "delta_t = delta_c1 / sqrt(t)"},
           {"k_c2", "1", "K_t = ceil(k_c2 t) + k_offset"},
           {"k_offset", "20", "K_t = ceil(k_c2 t) + k_offset"},
           {"burn_in", "100", "Langevin burn-in at the start of each M-step"},
           {"gamma", "2", "friction"},
           {"chains", "1", "parallel chains per gradient estimate"},
           {"loglik_every", "1", "marginal log-likelihood cadence (0 = never)"},
           {"quad_tolerance", "1e-10", "quadrature convergence tolerance"},
           {"modes", "sagd,exact_gd", "comma-separated subset of sagd,exact_gd"},
       },
       "mode,update,m_step,a,b,loglik"},
      {"genfit",
       "Fit a 1-D generator h(u) to x = z + e by likelihood refinement",
       {
           {"latent", "exponential", "true latent law: normal, exponential or mixture"},
           {"n", "1000", "number of observations"},
           {"data_seed", "1", "seed of the simulated data"},
           {"noise_var", "1", "variance of the additive noise e"},
           {"hidden", "16", "hidden width of the generator"},
           {"epochs", "60", "passes over the data"},
           {"batch", "100", "minibatch size"},
           {"alpha", "0.003", "step size"},
           {"decay", "false", "alpha_k = alpha / sqrt(k)"},
           {"update", "adam", "adam or plain"},
           {"adam_beta1", "0.9", "Adam first-moment decay"},
           {"adam_beta2", "0.999", "Adam second-moment decay"},
           {"gamma", "2", "friction"},
           {"delta", "0.1", "Langevin step size"},
           {"chain_steps", "10", "Langevin steps per observation per update"},
           {"burn_in", "100", "burn-in on the first visit of each observation"},
           {"probe_size", "100", "observations in the log-likelihood probe"},
           {"eval_samples", "100000", "generator draws for KS and W1"},
       },
       "epoch,ks,w1,probe_loglik"},
      {"bias-scan",
       "Bias and MSE of the time-average of |xi|^2 on a standard Gaussian",
       {
           {"dim", "2", "dimension"},
           {"gamma", "2", "friction"},
           {"deltas", "0.2,0.1,0.05,0.025", "comma-separated step sizes"},
           {"kdelta", "10000", "K = kdelta / delta when steps is empty"},
           {"steps", "", "explicit comma-separated K per delta"},
           {"reps", "20", "replications per delta"},
           {"burn_in_time", "20", "burn-in length in time units (steps = time / delta)"},
       },
       "delta,K,bias,mse,reps"},
  };
  return specs;
}

const CommandSpec* find_command(std::string_view name) {
  for (const CommandSpec& spec : command_specs()) {
    if (spec.name == name) {
      return &spec;
    }
  }
  return nullptr;
}

std::string command_help(const CommandSpec& spec) {
  std::ostringstream os;
  os << spec.name << ": " << spec.summary << "\n\nconfig keys (key = default):\n";
  for (const KeySpec& k : spec.keys) {
    os << "  " << k.name << " = " << (k.default_value.empty() ? "\"\"" : k.default_value)
       << "\n      " << k.help << '\n';
  }
  if (!spec.columns.empty()) {
    os << "\noutput columns: " << spec.columns << '\n';
  }
  return os.str();
}

void run_command(std::string_view name, const KeyValueConfig& cfg,
                 const RunOptions& opts) {
  const CommandSpec* spec = find_command(name);
  if (spec == nullptr) {
    throw ConfigError("unknown subcommand '" + std::string(name) + "'");
  }
  if (opts.out_path.empty()) {
    throw ConfigError("no output path given");
  }
  if (opts.threads < 1) {
    throw ConfigError("thread count must be at least 1");
  }
  const ConfigReader reader(cfg, spec->keys);
  if (name == "sample") {
    run_sample(reader, opts);
  } else if (name == "em-gamma") {
    run_em_gamma(reader, opts);
  } else if (name == "genfit") {
    run_genfit(reader, opts);
  } else {
    run_bias_scan(reader, opts);
  }
}

Cdf1D named_latent(std::string_view name) {
  if (name == "normal") {
    return Cdf1D::normal(1.0, 0.5);
  }
  if (name == "exponential") {
    return Cdf1D::exponential(2.0);
  }
  if (name == "mixture") {
    return Cdf1D::normal_mixture(0.4, 0.0, 0.5, 3.0, 0.5);
  }
  throw ConfigError("unknown latent law '" + std::string(name) +
                    "' (expected normal, exponential or mixture)");
}

double draw_named_latent(std::string_view name, RngStream& rng) {
  if (name == "normal") {
    return 1.0 + 0.5 * rng.normal();
  }
  if (name == "exponential") {
    return rng.exponential(2.0);
  }
  if (name == "mixture") {
    const bool first = rng.uniform() < 0.4;
    return (first ? 0.0 : 3.0) + 0.5 * rng.normal();
  }
  throw ConfigError("unknown latent law '" + std::string(name) + "'");
}

}  // namespace sagd
