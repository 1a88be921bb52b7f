/*
 * This file is part of libhnl.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 */

// Command-line front end. Talks to the library exclusively through the C
// API in hnl.h; table rendering works off the returned JSON.

#include "hnl.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct StateDeleter {
  void operator()(hnl_state* s) const { hnl_state_free(s); }
};
using StatePtr = std::unique_ptr<hnl_state, StateDeleter>;

struct StringDeleter {
  void operator()(char* s) const { hnl_string_free(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

int exit_code_of(hnl_status st) {
  switch (st) {
    case HNL_OK:
      return kExitOk;
    case HNL_ERR_PARSE:
    case HNL_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

/// Prints the error name (and message) on stderr, returns the exit code.
/// Library messages already start with the error name; avoid doubling it.
int report_error(hnl_status st, const char* errbuf) {
  const char* name = hnl_status_name(st);
  if (errbuf && std::strncmp(errbuf, name, std::strlen(name)) == 0) {
    std::cerr << errbuf << "\n";
  } else {
    std::cerr << name;
    if (errbuf && errbuf[0]) std::cerr << ": " << errbuf;
    std::cerr << "\n";
  }
  return exit_code_of(st);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream os;
  os << in.rdbuf();
  out = os.str();
  return true;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << content;
  return out.good();
}

int load_state(const std::string& path, StatePtr& state) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "cannot read state file '" << path << "'\n";
    return kExitUsage;
  }
  char err[256] = {0};
  hnl_state* raw = nullptr;
  const hnl_status st = hnl_state_from_json(text.c_str(), &raw, err, sizeof(err));
  if (st != HNL_OK) return report_error(st, err);
  state.reset(raw);
  return kExitOk;
}

void print_analyze_table(const json& rep) {
  const auto& lam = rep["spectrum"]["lambda"];
  std::printf("lambda            : %.12g  %.12g  %.12g  %.12g\n",
              lam[0].get<double>(), lam[1].get<double>(), lam[2].get<double>(),
              lam[3].get<double>());
  std::printf("hidden_nonlocal   : %s\n",
              rep["hidden_nonlocal"].get<bool>() ? "true" : "false");
  std::printf("max_filtered_chsh : %.12g\n",
              rep["max_filtered_chsh"].get<double>());
  std::printf("horodecki_M       : %.12g\n", rep["horodecki_M"].get<double>());
  std::printf("chsh_unfiltered   : %.12g\n",
              rep["chsh_unfiltered"].get<double>());
  std::printf("separable         : %s\n",
              rep["separable"].get<bool>() ? "true" : "false");
}

int cmd_analyze(const std::string& state_file, bool as_json) {
  StatePtr state;
  if (int rc = load_state(state_file, state)) return rc;
  char err[256] = {0};
  char* raw = nullptr;
  const hnl_status st = hnl_analyze(state.get(), &raw, err, sizeof(err));
  if (st != HNL_OK) return report_error(st, err);
  StringPtr rep(raw);
  if (as_json) {
    std::printf("%s\n", rep.get());
  } else {
    print_analyze_table(json::parse(rep.get()));
  }
  return kExitOk;
}

void survey_progress(double fraction, void* user) {
  int* last_decile = static_cast<int*>(user);
  const int decile = static_cast<int>(fraction * 10.0);
  if (decile > *last_decile) {
    *last_decile = decile;
    std::fprintf(stderr, "survey: %d%%\n", decile * 10);
  }
}

int cmd_survey(std::uint64_t samples, std::uint64_t seed,
               const std::string& measure, const std::string& out_file,
               const std::string& csv_file, int threads) {
  char err[256] = {0};
  char* raw = nullptr;
  int last_decile = 0;
  const hnl_status st =
      hnl_survey_run(samples, seed, measure.c_str(), threads, survey_progress,
                     &last_decile, &raw, err, sizeof(err));
  if (st != HNL_OK) return report_error(st, err);
  StringPtr rep(raw);
  const std::string rep_text = std::string(rep.get()) + "\n";
  if (!out_file.empty()) {
    if (!write_file(out_file, rep_text)) {
      std::cerr << "cannot write '" << out_file << "'\n";
      return kExitDomain;
    }
  } else {
    std::fputs(rep_text.c_str(), stdout);
  }
  if (!csv_file.empty()) {
    char* csv_raw = nullptr;
    const hnl_status cst =
        hnl_survey_report_csv(rep.get(), &csv_raw, err, sizeof(err));
    if (cst != HNL_OK) return report_error(cst, err);
    StringPtr csv(csv_raw);
    if (!write_file(csv_file, csv.get())) {
      std::cerr << "cannot write '" << csv_file << "'\n";
      return kExitDomain;
    }
  }
  return kExitOk;
}

int cmd_verify(const std::string& state_file, std::uint64_t random_n,
               std::uint64_t seed, double t_min, double slack, int threads,
               int n_random, int n_refine) {
  std::vector<StatePtr> states;
  if (!state_file.empty()) {
    StatePtr s;
    if (int rc = load_state(state_file, s)) return rc;
    states.push_back(std::move(s));
  } else {
    for (std::uint64_t i = 0; i < random_n; ++i) {
      char err[256] = {0};
      hnl_state* raw = nullptr;
      const hnl_status st = hnl_state_random_choi(hnl_seed_derive(seed, i), 4,
                                                  &raw, err, sizeof(err));
      if (st != HNL_OK) return report_error(st, err);
      states.emplace_back(raw);
    }
  }

  struct Row {
    hnl_status st = HNL_OK;
    int certified = 0;
    std::string json_text;
    std::string err;
  };
  std::vector<Row> rows(states.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= states.size()) return;
      char err[256] = {0};
      char* raw = nullptr;
      rows[i].st = hnl_certify(states[i].get(), n_random, n_refine, t_min,
                               hnl_seed_derive(seed, 0x5e4c + i), slack,
                               &rows[i].certified, &raw, err, sizeof(err));
      rows[i].err = err;
      if (raw) {
        rows[i].json_text = raw;
        hnl_string_free(raw);
      }
    }
  };
  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(
                               n_threads, static_cast<unsigned>(states.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::uint64_t passed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].st != HNL_OK) return report_error(rows[i].st, rows[i].err.c_str());
    json line = json::parse(rows[i].json_text);
    line["index"] = i;
    line["certified"] = rows[i].certified != 0;
    std::printf("%s\n", line.dump().c_str());
    if (rows[i].certified) ++passed;
  }
  json summary{{"total", states.size()},
               {"certified", passed},
               {"pass", passed == states.size()}};
  std::printf("%s\n", summary.dump().c_str());
  return passed == states.size() ? kExitOk : kExitDomain;
}

int cmd_distill(const std::string& state_file, double eps,
                const std::vector<double>& n_grid, bool as_json) {
  StatePtr state;
  if (int rc = load_state(state_file, state)) return rc;
  char err[256] = {0};
  char* raw = nullptr;
  const hnl_status st =
      hnl_distill(state.get(), eps, 10000, n_grid.empty() ? nullptr : n_grid.data(),
                  n_grid.size(), &raw, err, sizeof(err));
  if (st != HNL_OK) return report_error(st, err);
  StringPtr res(raw);
  if (as_json) {
    std::printf("%s\n", res.get());
    return kExitOk;
  }
  const json doc = json::parse(res.get());
  std::printf("case          : %s\n", doc["case"].get<std::string>().c_str());
  std::printf("params (a b c d): %.12g %.12g %.12g %.12g\n",
              doc["params"]["a"].get<double>(), doc["params"]["b"].get<double>(),
              doc["params"]["c"].get<double>(), doc["params"]["d"].get<double>());
  const auto& diag = doc["diag"];
  std::printf("reduced diag  : %.12g %.12g %.12g %.12g\n",
              diag[0].get<double>(), diag[1].get<double>(),
              diag[2].get<double>(), diag[3].get<double>());
  std::printf("fit residual  : %.3g   iterations: %d\n",
              doc["fit_residual"].get<double>(), doc["iterations"].get<int>());
  const auto& table = doc["trade_off"];
  if (!table.empty()) {
    std::printf("%12s %22s %16s\n", "n", "success_prob", "chsh");
    for (const auto& row : table)
      std::printf("%12g %22.12g %16.12g\n", row["n"].get<double>(),
                  row["success_prob"].get<double>(), row["chsh"].get<double>());
  }
  return kExitOk;
}

int cmd_gen(const std::string& kind, double p, double a, double b, double c,
            double d, std::uint64_t seed, int env_dim,
            const std::string& out_file) {
  char err[256] = {0};
  hnl_state* raw = nullptr;
  hnl_status st = HNL_OK;
  if (kind == "werner") {
    st = hnl_state_werner(p, &raw, err, sizeof(err));
  } else if (kind == "pure") {
    st = hnl_state_random_pure(seed, &raw, err, sizeof(err));
  } else if (kind == "choi") {
    st = hnl_state_random_choi(seed, env_dim, &raw, err, sizeof(err));
  } else if (kind == "eq7") {
    st = hnl_state_normal_form_family(a, b, c, d, &raw, err, sizeof(err));
  } else {
    std::cerr << "unknown --kind '" << kind << "'\n";
    return kExitUsage;
  }
  if (st != HNL_OK) return report_error(st, err);
  StatePtr state(raw);
  char* text_raw = nullptr;
  st = hnl_state_to_json(state.get(), &text_raw, err, sizeof(err));
  if (st != HNL_OK) return report_error(st, err);
  StringPtr text(text_raw);
  if (!write_file(out_file, text.get())) {
    std::cerr << "cannot write '" << out_file << "'\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hidden Bell-CHSH nonlocality of two-qubit states under local "
               "filtering"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hnl_version()));

  // analyze
  auto* analyze = app.add_subcommand("analyze", "criterion report for a state file");
  std::string an_state;
  bool an_json = false, an_table = false;
  analyze->add_option("--state", an_state, "state JSON file")->required();
  auto* fj = analyze->add_flag("--json", an_json, "machine-readable output");
  analyze->add_flag("--table", an_table, "human-readable output (default)")
      ->excludes(fj);

  // survey
  auto* survey = app.add_subcommand("survey", "Monte-Carlo volume fractions");
  std::uint64_t sv_samples = 0, sv_seed = 0;
  std::string sv_measure = "stinespring-env4", sv_out, sv_csv;
  int sv_threads = 0;
  survey->add_option("--samples", sv_samples, "number of samples (>= 1)")
      ->required()
      ->check(CLI::PositiveNumber);
  survey->add_option("--seed", sv_seed, "root seed")->required();
  survey->add_option("--measure", sv_measure, "measure tag");
  survey->add_option("--out", sv_out, "write the JSON report here");
  survey->add_option("--csv", sv_csv, "also write a per-class CSV here");
  survey->add_option("--threads", sv_threads, "worker threads (0 = all cores)");

  // verify
  auto* verify = app.add_subcommand("verify", "oracle certification of the closed form");
  std::string vf_state;
  std::uint64_t vf_random = 0, vf_seed = 0;
  double vf_tmin = 0.01, vf_slack = 0.05;
  auto* vs = verify->add_option("--state", vf_state, "state JSON file");
  auto* vr = verify->add_option("--random", vf_random,
                                "number of random Choi states")
                 ->check(CLI::PositiveNumber);
  vs->excludes(vr);
  verify->add_option("--seed", vf_seed, "root seed")->required();
  verify->add_option("--tmin", vf_tmin, "smallest filter ratio in the search")
      ->check(CLI::Range(1e-6, 1.0));
  verify->add_option("--slack", vf_slack, "asymptote slack for positive cases");
  int vf_threads = 0;
  verify->add_option("--threads", vf_threads, "worker threads (0 = all cores)");

  // distill
  auto* distill = app.add_subcommand("distill", "normal form and trade-off table");
  std::string ds_state, ds_grid = "1,2,5,10,20,50,100";
  double ds_eps = 1e-9;
  bool ds_json = false;
  distill->add_option("--state", ds_state, "state JSON file")->required();
  distill->add_option("--eps", ds_eps, "convergence threshold");
  distill->add_option("--n-grid", ds_grid, "comma-separated n values");
  distill->add_flag("--json", ds_json, "machine-readable output");

  // gen
  auto* gen = app.add_subcommand("gen", "write a state file");
  std::string gn_kind, gn_out;
  double gn_p = 0.5, gn_a = 1.0, gn_b = 0.5, gn_c = 0.5, gn_d = 0.0;
  std::uint64_t gn_seed = 0;
  int gn_env = 4;
  gen->add_option("--kind", gn_kind, "werner | pure | choi | eq7")->required();
  gen->add_option("-p", gn_p, "Werner mixing parameter");
  gen->add_option("-a", gn_a, "family parameter a");
  gen->add_option("-b", gn_b, "family parameter b");
  gen->add_option("-c", gn_c, "family parameter c");
  gen->add_option("-d", gn_d, "family parameter d");
  gen->add_option("--seed", gn_seed, "seed for pure/choi");
  gen->add_option("--env-dim", gn_env, "environment dimension for choi");
  gen->add_option("--out", gn_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (analyze->parsed()) return cmd_analyze(an_state, an_json);
  if (survey->parsed())
    return cmd_survey(sv_samples, sv_seed, sv_measure, sv_out, sv_csv, sv_threads);
  if (verify->parsed()) {
    if (vf_state.empty() && vf_random == 0) {
      std::cerr << "verify requires --state or --random\n";
      return kExitUsage;
    }
    return cmd_verify(vf_state, vf_random, vf_seed, vf_tmin, vf_slack,
                      vf_threads, 2000, 3);
  }
  if (distill->parsed()) {
    std::vector<double> grid;
    std::stringstream ss(ds_grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        grid.push_back(std::stod(item));
      } catch (const std::exception&) {
        std::cerr << "bad --n-grid entry '" << item << "'\n";
        return kExitUsage;
      }
    }
    return cmd_distill(ds_state, ds_eps, grid, ds_json);
  }
  if (gen->parsed())
    return cmd_gen(gn_kind, gn_p, gn_a, gn_b, gn_c, gn_d, gn_seed, gn_env, gn_out);
  return kExitUsage;
}
