// jacobi_cli: evaluation, convolution, random walks, limit certification and
// CLT experiments for Jacobi hypergroups.
//
// Exit codes: 0 success, 2 configuration or domain error, 3 numeric failure.
// Machine-readable results go to stdout or files; progress goes to stderr.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jacobi/io.hpp"
#include "jacobi/jacobi.hpp"

namespace {

using namespace jacobi;
using io::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

/// --threads beats the config file, which beats JACOBI_THREADS; 0 means all cores.
unsigned pick_threads(std::optional<unsigned> flag, std::optional<unsigned> file) {
  if (flag) return *flag;
  if (file) return *file;
  if (const char* env = std::getenv("JACOBI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) throw ConfigError("JACOBI_THREADS must be a non-negative integer");
    return static_cast<unsigned>(v);
  }
  return 0;
}

struct ParamFlags {
  std::optional<double> alpha, beta;
  std::optional<int> field_dim, k;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "alpha index");
    app->add_option("--beta", beta, "beta index");
    app->add_option("--field-dim", field_dim, "hyperbolic space field dimension d (1, 2, 4)");
    app->add_option("--k", k, "hyperbolic space dimension k (>= 2)");
  }

  JacobiParams resolve() const {
    const bool direct = alpha || beta;
    const bool hyper = field_dim || k;
    if (direct == hyper) throw ConfigError("give either --alpha/--beta or --field-dim/--k");
    if (hyper) {
      if (!field_dim || !k) throw ConfigError("--field-dim and --k must be given together");
      return hyperbolic_params({*field_dim, *k});
    }
    if (!alpha || !beta) throw ConfigError("--alpha and --beta must be given together");
    return JacobiParams(*alpha, *beta);
  }
};

std::string fmt15(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  io::write_text(path, text, std::cout);
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  io::write_csv(os, header, rows);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacobi hypergroups: functions, convolutions, random walks and limit theorems"};
  app.require_subcommand(1);
  std::optional<unsigned> threads_flag;
  app.add_option("--threads", threads_flag, "worker threads (0 = all cores; default from JACOBI_THREADS)");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate the Jacobi function phi_lambda(t)");
  ParamFlags eval_params;
  eval_params.attach(eval);
  double eval_lambda = 0.0, eval_lambda_im = 0.0, eval_t = 0.0;
  std::string eval_route = "series";
  eval->add_option("--lambda", eval_lambda, "real part of the spectral parameter")->required();
  eval->add_option("--lambda-im", eval_lambda_im, "imaginary part of the spectral parameter");
  eval->add_option("--t", eval_t, "distance t >= 0")->required();
  eval->add_option("--route", eval_route, "series or integral")->check(CLI::IsMember({"series", "integral"}));

  // convolve
  auto* conv = app.add_subcommand("convolve", "integrate phi_lambda against delta_s * delta_t");
  ParamFlags conv_params;
  conv_params.attach(conv);
  double conv_s = 0.0, conv_t = 0.0, conv_lambda = 0.0;
  conv->add_option("--s", conv_s, "first point")->required();
  conv->add_option("--t", conv_t, "second point")->required();
  conv->add_option("--lambda", conv_lambda, "real spectral parameter")->required();

  // moments
  auto* mom = app.add_subcommand("moments", "moment function m_k(t)");
  ParamFlags mom_params;
  mom_params.attach(mom);
  int mom_k = 1;
  double mom_t = 0.0;
  mom->add_option("--order", mom_k, "moment order k >= 1");
  mom->add_option("--t", mom_t, "distance t >= 0")->required();

  // walk
  auto* walk = app.add_subcommand("walk", "simulate a Jacobi random walk from a config file");
  std::string walk_config;
  std::optional<int> walk_replicas, walk_steps;
  std::optional<std::uint64_t> walk_seed;
  std::string walk_csv, walk_json, walk_paths;
  walk->add_option("config", walk_config, "experiment config (JSON)")->required();
  walk->add_option("--replicas", walk_replicas, "override experiment.replicas");
  walk->add_option("--steps", walk_steps, "override experiment.steps");
  walk->add_option("--seed", walk_seed, "override seed");
  walk->add_option("--csv", walk_csv, "finals CSV path (overrides output.csv; '-' for stdout)");
  walk->add_option("--json", walk_json, "summary JSON path (overrides output.json; '-' for stdout)");
  walk->add_option("--paths-csv", walk_paths, "trajectory CSV path (overrides output.paths_csv; implies recording)");

  // limits
  auto* lim = app.add_subcommand("limits", "certify a limit theorem numerically from a config file");
  std::string lim_config, lim_csv, lim_json;
  lim->add_option("config", lim_config, "experiment config (JSON)")->required();
  lim->add_option("--csv", lim_csv, "residual CSV path");
  lim->add_option("--json", lim_json, "report JSON path");

  // clt
  auto* clt = app.add_subcommand("clt", "run a CLT experiment from a config file");
  std::string clt_config, clt_csv, clt_json, clt_samples, clt_regime;
  std::optional<int> clt_replicas;
  std::optional<std::uint64_t> clt_seed;
  clt->add_option("config", clt_config, "experiment config (JSON)")->required();
  clt->add_option("--replicas", clt_replicas, "override experiment.replicas");
  clt->add_option("--seed", clt_seed, "override seed");
  clt->add_option("--regime", clt_regime, "auto, case1, case2 or case3 (regime experiments)")
      ->check(CLI::IsMember({"auto", "case1", "case2", "case3"}));
  clt->add_option("--csv", clt_csv, "per-n summary CSV path");
  clt->add_option("--json", clt_json, "report JSON path");
  clt->add_option("--samples-csv", clt_samples, "normalized statistic at the largest n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*eval) {
      const auto p = eval_params.resolve();
      const Complex lambda{eval_lambda, eval_lambda_im};
      const Complex v = eval_route == "series" ? jacobi_phi_series(p, lambda, eval_t)
                                               : jacobi_phi_integral(p, lambda, eval_t);
      std::cout << fmt15(v.real()) << ' ' << fmt15(v.imag()) << '\n';
    } else if (*conv) {
      const auto p = conv_params.resolve();
      const Complex lambda{conv_lambda, 0.0};
      const Complex lhs = convolve_point_expect(
          p, conv_s, conv_t, [&](double x) { return jacobi_phi_series(p, lambda, x); });
      const Complex rhs = jacobi_phi_series(p, lambda, conv_s) * jacobi_phi_series(p, lambda, conv_t);
      std::cout << "integral " << fmt15(lhs.real()) << ' ' << fmt15(lhs.imag()) << '\n'
                << "product " << fmt15(rhs.real()) << ' ' << fmt15(rhs.imag()) << '\n'
                << "difference " << fmt15(std::abs(lhs - rhs)) << '\n';
    } else if (*mom) {
      const auto p = mom_params.resolve();
      const auto m = moment_fn_checked(p, mom_k, mom_t);
      std::cout << fmt15(m.value) << ' ' << fmt15(m.residual) << '\n';
    } else if (*walk) {
      const auto file = io::load_experiment(walk_config);
      auto exp = io::parse_walk(file);
      if (walk_replicas) exp.config.replicas = *walk_replicas;
      if (walk_steps) exp.config.steps = *walk_steps;
      if (walk_seed) exp.config.seed = *walk_seed;
      try {
        exp.config.validate();
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      const std::string paths_path = walk_paths.empty() ? file.output.paths_csv : walk_paths;
      WalkOptions opt;
      opt.threads = pick_threads(threads_flag, file.threads);
      opt.record_paths = exp.record_paths || !walk_paths.empty();
      if (opt.record_paths && paths_path.empty())
        throw ConfigError("record_paths needs output.paths_csv or --paths-csv");
      std::cerr << "walk: " << exp.config.replicas << " replicas x " << exp.config.steps << " steps\n";
      const auto res = simulate_walk(exp.config, opt);
      std::ostringstream csv;
      io::write_column_csv(csv, "final_position", res.finals);
      emit(walk_csv.empty() ? file.output.csv : walk_csv, csv.str());
      emit(walk_json.empty() ? file.output.json : walk_json, io::walk_summary(exp.config, res).dump(2) + "\n");
      if (opt.record_paths) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < res.paths.size(); ++i)
          for (std::size_t m = 0; m < res.paths[i].size(); ++m)
            rows.push_back({std::to_string(i), std::to_string(m), io::format_double(res.paths[i][m])});
        emit(paths_path, csv_text({"replica", "step", "position"}, rows));
      }
    } else if (*lim) {
      const auto file = io::load_experiment(lim_config);
      std::cerr << "limits: " << file.experiment.value("kind", "?") << '\n';
      const auto out = io::run_limits(file, pick_threads(threads_flag, file.threads));
      emit(lim_csv.empty() ? file.output.csv : lim_csv, csv_text(out.header, out.rows));
      emit(lim_json.empty() ? file.output.json : lim_json, out.summary.dump(2) + "\n");
    } else if (*clt) {
      const auto file = io::load_experiment(clt_config);
      io::CltOverrides ov;
      ov.replicas = clt_replicas;
      ov.seed = clt_seed;
      if (!clt_regime.empty()) ov.regime = io::parse_regime(clt_regime);
      std::cerr << "clt: " << file.experiment.value("kind", "?") << '\n';
      const auto out = io::run_clt(file, ov, pick_threads(threads_flag, file.threads));
      const std::string json_path = clt_json.empty() ? file.output.json : clt_json;
      const std::string csv_path = clt_csv.empty() ? file.output.csv : clt_csv;
      if (out.report) {
        emit(json_path, io::clt_report_to_json(*out.report).dump(2) + "\n");
        emit(csv_path, csv_text(io::clt_points_header(), io::clt_points_rows(*out.report)));
        const std::string samples_path = clt_samples.empty() ? file.output.samples_csv : clt_samples;
        if (!samples_path.empty()) {
          std::ostringstream os;
          io::write_column_csv(os, "normalized_statistic", out.report->samples);
          emit(samples_path, os.str());
        }
      } else {
        emit(json_path, io::tail_report_to_json(*out.tail).dump(2) + "\n");
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : out.tail->rows)
          rows.push_back({std::to_string(r.n), io::format_double(r.c), io::format_double(r.tail),
                          io::format_double(r.product), io::format_double(r.slack)});
        emit(csv_path, csv_text({"n", "c", "tail", "product", "slack"}, rows));
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
