#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "kgstab/errors.hpp"
#include "kgstab/evolve.hpp"
#include "kgstab/numerics.hpp"
#include "kgstab/soliton.hpp"
#include "kgstab/spectrum.hpp"
#include "kgstab/stability.hpp"
#include "serialize.hpp"

namespace kgstab::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelArgs {
  double a = 0.0;
  double b = 0.0;
  double m = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--a", a, "quadratic coefficient a > 0")->required();
    app->add_option("--b", b, "cubic coefficient b > 0")->required();
    app->add_option("--m", m, "mass m > 0")->required();
  }
  ModelParams params() const { return ModelParams(a, b, m); }
};

// Writes to --out when given, otherwise to the default stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void emit_json(std::ostream& os, json doc, json settings,
               std::chrono::steady_clock::time_point start) {
  settings["wall_time_seconds"] = seconds_since(start);
  doc["provenance"] = std::move(settings);
  os << doc.dump(2) << '\n';
}

std::string csv(std::initializer_list<double> values) {
  std::string line;
  for (double v : values) {
    if (!line.empty()) line += ',';
    line += format_number(v);
  }
  return line;
}

}  // namespace

unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KGSTAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      n = std::min(n, static_cast<unsigned>(cap));
    }
  }
  return n;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Standing waves of the quadratic-cubic Klein-Gordon equation", "kgstab"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  std::string out_path;
  bool as_json = false;
  bool as_csv = false;

  // tau-star
  auto* tau_cmd = app.add_subcommand("tau-star", "sup of k2 and the critical tau of the convexity threshold");
  double tau_tol = 1e-15;
  tau_cmd->add_option("--tol", tau_tol, "bisection tolerance in alpha");
  tau_cmd->add_flag("--json", as_json, "emit a JSON report");

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "stable/unstable partition of the frequency window");
  ModelArgs cls_model;
  cls_model.attach(cls_cmd);
  bool no_verify = false;
  double root_tol = 1e-12;
  unsigned cls_threads = 0;
  cls_cmd->add_flag("--json", as_json, "emit JSON (default)");
  cls_cmd->add_flag("--csv", as_csv, "emit intervals as CSV");
  cls_cmd->add_flag("--no-verify", no_verify, "skip the finite-difference oracle");
  cls_cmd->add_option("--root-tol", root_tol, "bisection tolerance in alpha");
  cls_cmd->add_option("--threads", cls_threads, "oracle worker threads");
  cls_cmd->add_option("--out", out_path, "output file");

  // profile
  auto* prof_cmd = app.add_subcommand("profile", "sampled soliton profile as CSV");
  ModelArgs prof_model;
  prof_model.attach(prof_cmd);
  double prof_omega = 0.0;
  double prof_h = 0.01;
  double prof_tail = 1e-12;
  std::optional<double> prof_length;
  bool prof_full = false;
  prof_cmd->add_option("--omega", prof_omega, "frequency")->required();
  prof_cmd->add_option("--h", prof_h, "grid step");
  prof_cmd->add_option("--tail", prof_tail, "tail tolerance R(L)/R(0)");
  prof_cmd->add_option("--L", prof_length, "half-length");
  prof_cmd->add_flag("--full", prof_full, "write [-L, L] instead of [0, L]");
  prof_cmd->add_option("--out", out_path, "output file");

  // sigma
  auto* sig_cmd = app.add_subcommand("sigma", "closed-form sigma(omega) = omega ||R||^2");
  ModelArgs sig_model;
  sig_model.attach(sig_cmd);
  double sig_omega = 0.0;
  double sig_h = 0.01;
  bool sig_check = false;
  sig_cmd->add_option("--omega", sig_omega, "frequency")->required();
  sig_cmd->add_option("--h", sig_h, "quadrature grid step for --check");
  sig_cmd->add_flag("--check", sig_check, "compare with quadrature");
  sig_cmd->add_flag("--json", as_json, "emit a JSON report");
  sig_cmd->add_option("--out", out_path, "output file");

  // spectrum
  auto* spec_cmd = app.add_subcommand("spectrum", "lowest eigenvalues of L+ and L-");
  ModelArgs spec_model;
  spec_model.attach(spec_cmd);
  double spec_omega = 0.0;
  double spec_h = 0.02;
  std::optional<double> spec_length;
  std::size_t spec_k = 4;
  std::string vectors_path;
  spec_cmd->add_option("--omega", spec_omega, "frequency")->required();
  spec_cmd->add_option("--h", spec_h, "grid step");
  spec_cmd->add_option("--L", spec_length, "half-length (default 40/sqrt(m^2-omega^2))");
  spec_cmd->add_option("--k", spec_k, "eigenpairs per operator")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--vectors", vectors_path, "CSV file for eigenvectors");
  spec_cmd->add_flag("--json", as_json, "emit JSON (default)");
  spec_cmd->add_option("--out", out_path, "output file");

  // evolve
  auto* ev_cmd = app.add_subcommand("evolve", "leapfrog evolution from standing-wave data");
  ModelArgs ev_model;
  ev_model.attach(ev_cmd);
  double ev_omega = 0.0;
  std::string ev_perturb = "none";
  double ev_t_final = 0.0;
  double ev_dx = 0.02;
  double ev_dt = 0.01;
  std::size_t ev_sample = 10;
  std::optional<double> ev_length;
  std::string summary_path;
  ev_cmd->add_option("--omega", ev_omega, "frequency")->required();
  ev_cmd->add_option("--perturb", ev_perturb, "none | scale:<eps> | bump:<eps>");
  ev_cmd->add_option("--t-final", ev_t_final, "final time")->required();
  ev_cmd->add_option("--dx", ev_dx, "spatial step");
  ev_cmd->add_option("--dt", ev_dt, "time step");
  ev_cmd->add_option("--sample", ev_sample, "steps between samples")->check(CLI::PositiveNumber);
  ev_cmd->add_option("--L", ev_length, "half-length");
  ev_cmd->add_option("--out", out_path, "diagnostics CSV (default stdout)");
  ev_cmd->add_option("--summary", summary_path, "JSON summary file (stdout when --out is set)");

  // sweep
  auto* sw_cmd = app.add_subcommand("sweep", "omega grid of (omega, alpha, sigma, sign d'')");
  ModelArgs sw_model;
  sw_model.attach(sw_cmd);
  std::size_t sw_n = 0;
  unsigned sw_threads = 0;
  sw_cmd->add_option("--n", sw_n, "number of interior points")->required()->check(CLI::PositiveNumber);
  sw_cmd->add_option("--threads", sw_threads, "worker threads");
  sw_cmd->add_option("--out", out_path, "output file");

  std::vector<std::string> argv_storage{"kgstab"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    if (what.empty()) what = "invalid arguments";
    err << "error: usage: " << what << '\n';
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (tau_cmd->parsed()) {
      const auto ts = tau_star(tau_tol);
      const auto crit = critical_tau(tau_tol);
      if (as_json) {
        json payload{{"tau_star", ts.value},
                     {"alpha_d", ts.argmax},
                     {"critical_tau", crit.value},
                     {"critical_alpha", crit.argmax}};
        emit_json(out, envelope("tau-star", nullptr, payload), {{"tolerance", tau_tol}}, start);
      } else {
        out << "tau_star " << format_number(ts.value) << '\n'
            << "alpha_d " << format_number(ts.argmax) << '\n'
            << "critical_tau " << format_number(crit.value) << '\n'
            << "critical_alpha " << format_number(crit.argmax) << '\n';
      }
      return kOk;
    }

    if (cls_cmd->parsed()) {
      if (as_json && as_csv) throw UsageError("--json and --csv are exclusive");
      const auto p = cls_model.params();
      ClassifyOptions opts;
      opts.root_tolerance = root_tol;
      opts.verify_with_oracle = !no_verify;
      opts.threads = cls_threads ? std::min(cls_threads, thread_budget()) : thread_budget();
      const auto report = classify(p, opts);
      Sink sink(out_path, out);
      if (as_csv) {
        sink.get() << "lo,hi,verdict\n";
        for (const auto& iv : report.intervals) {
          sink.get() << csv({iv.lo, iv.hi}) << ',' << to_string(iv.verdict) << '\n';
        }
      } else {
        emit_json(sink.get(), envelope("classify", params_json(p), to_json(report)),
                  {{"root_tolerance", root_tol},
                   {"verified", !no_verify},
                   {"oracle_step_x", opts.oracle_grid.step}},
                  start);
      }
      return kOk;
    }

    if (prof_cmd->parsed()) {
      const auto p = prof_model.params();
      const auto profile = build_profile(p, prof_omega, {prof_h, prof_length, prof_tail});
      Sink sink(out_path, out);
      auto& os = sink.get();
      os << "x,R\n";
      if (prof_full) {
        const auto full = profile.full_line_values();
        const double length = profile.half_length();
        for (std::size_t i = 0; i < full.size(); ++i) {
          os << csv({-length + profile.step() * static_cast<double>(i), full[i]}) << '\n';
        }
      } else {
        for (std::size_t i = 0; i < profile.size(); ++i) {
          os << csv({profile.x(i), profile[i]}) << '\n';
        }
      }
      return kOk;
    }

    if (sig_cmd->parsed()) {
      const auto p = sig_model.params();
      const double closed = sigma_closed(p, sig_omega);
      json payload{{"omega", sig_omega}, {"alpha", alpha_of_omega(p, sig_omega)},
                   {"sigma_closed", closed}};
      if (sig_check) {
        const double quad = charge(build_profile(p, sig_omega, {sig_h, std::nullopt, 1e-12}));
        payload["sigma_quadrature"] = quad;
        payload["relative_gap"] = std::abs(closed - quad) / closed;
      }
      Sink sink(out_path, out);
      if (as_json) {
        emit_json(sink.get(), envelope("sigma", params_json(p), payload),
                  {{"step_x", sig_h}}, start);
      } else {
        for (const char* key : {"sigma_closed", "sigma_quadrature", "relative_gap"}) {
          if (payload.contains(key)) {
            sink.get() << key << ' ' << format_number(payload[key].get<double>()) << '\n';
          }
        }
      }
      return kOk;
    }

    if (spec_cmd->parsed()) {
      const auto p = spec_model.params();
      const auto report = spectral_report(p, spec_omega, {spec_h, spec_length, 1e-12}, spec_k);
      if (!vectors_path.empty()) {
        std::ofstream vf(vectors_path);
        if (!vf) throw UsageError("cannot open vectors file '" + vectors_path + "'");
        vf << "x";
        for (std::size_t j = 0; j < report.lplus_vectors.size(); ++j) vf << ",lplus_v" << j;
        for (std::size_t j = 0; j < report.lminus_vectors.size(); ++j) vf << ",lminus_v" << j;
        vf << '\n';
        for (std::size_t i = 0; i < report.grid.size(); ++i) {
          vf << format_number(report.grid[i]);
          for (const auto& v : report.lplus_vectors) vf << ',' << format_number(v[i]);
          for (const auto& v : report.lminus_vectors) vf << ',' << format_number(v[i]);
          vf << '\n';
        }
      }
      Sink sink(out_path, out);
      emit_json(sink.get(), envelope("spectrum", params_json(p), to_json(report)),
                {{"k", spec_k}, {"bisection_tolerance", 1e-10}}, start);
      return kOk;
    }

    if (ev_cmd->parsed()) {
      const auto p = ev_model.params();
      Perturbation perturbation;
      try {
        perturbation = Perturbation::parse(ev_perturb);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      RunOptions opts;
      opts.step_x = ev_dx;
      opts.step_t = ev_dt;
      opts.half_length = ev_length;
      const auto diag = run(p, ev_omega, perturbation, ev_t_final, ev_sample, opts);
      const auto summary = summarize(diag);
      {
        Sink sink(out_path, out);
        auto& os = sink.get();
        os << "time,energy,charge,orbital_distance,sup_amplitude\n";
        for (std::size_t i = 0; i < diag.times.size(); ++i) {
          os << csv({diag.times[i], diag.energy[i], diag.charge[i],
                     diag.orbital_distance[i], diag.sup_amplitude[i]})
             << '\n';
        }
      }
      if (!summary_path.empty() || !out_path.empty()) {
        Sink sink(summary_path, out);
        json payload = to_json(summary, diag);
        payload["omega"] = ev_omega;
        payload["perturbation"] = perturbation.to_string();
        emit_json(sink.get(), envelope("evolve", params_json(p), payload),
                  {{"sample_every", ev_sample}}, start);
      }
      if (diag.truncated) {
        err << "error: blowup: run truncated at t=" << format_number(*diag.blowup_time) << '\n';
        return kBlowUp;
      }
      return kOk;
    }

    if (sw_cmd->parsed()) {
      const auto p = sw_model.params();
      const auto window = frequency_window(p);
      struct Row { double omega, alpha, sigma; int sign; };
      std::vector<Row> rows(sw_n);
      const unsigned threads = sw_threads ? std::min(sw_threads, thread_budget()) : thread_budget();
      numerics::parallel_for(sw_n, threads, [&](std::size_t i) {
        const double w = window.omega_star +
                         window.width() * static_cast<double>(i + 1) / static_cast<double>(sw_n + 1);
        rows[i] = {w, alpha_of_omega(p, w), sigma_closed(p, w), d_second_sign(p, w)};
      });
      Sink sink(out_path, out);
      sink.get() << "omega,alpha,sigma,d2_sign\n";
      for (const auto& r : rows) {
        sink.get() << csv({r.omega, r.alpha, r.sigma}) << ',' << r.sign << '\n';
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kUsage;
  } catch (const GridError& e) {
    err << "error: grid: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: domain: " << e.what() << '\n';
    return kDomain;
  } catch (const OracleDisagreement& e) {
    err << "error: oracle: " << e.what() << '\n';
    return kOracle;
  } catch (const BlowUpError& e) {
    err << "error: blowup: " << e.what() << '\n';
    return kBlowUp;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kFailure;
  }
  err << "error: usage: no subcommand\n";
  return kUsage;
}

}  // namespace kgstab::cli
