#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "coherence/basis_opt.hpp"
#include "coherence/error.hpp"
#include "coherence/infdim.hpp"
#include "coherence/measures.hpp"
#include "coherence/serialization.hpp"
#include "coherence/state.hpp"

namespace coherence::cli {

namespace {

enum class Format { Json, Tsv };

struct RunConfig {
  std::vector<std::string> inputs;
  std::string output;
  double tol = kDefaultTolerance;
  std::uint64_t seed = 0;
  std::size_t budget = 10000;
  std::string target = "mu";
  bool haar_only = false;
  std::size_t trace_stride = 0;
  std::string family;
  std::size_t grid_d = 0;
  double p_max = 0.0;
  std::size_t grid_m = 512;
  double hbar = kDefaultHbar;
  double q = 0.5;
  double nbar = 1.0;
  double alpha = std::sqrt(2.0);
  double sigma_x = 0.0;
  double x0 = 0.0;
  double p0 = 0.0;
  std::size_t dim = 2;
  std::string kind = "ginibre_mixed";
  std::size_t rank = 1;
  std::string format = "json";
};

struct Outcome {
  int code = kExitOk;
  std::string text;
  std::string diagnostic;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CoherenceError(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int code_for(const CoherenceError& e) { return e.is_internal() ? kExitInternal : kExitValidation; }

// Runs `body` and maps library errors onto exit codes and a diagnostic line.
template <typename F>
Outcome guarded(const std::string& label, F&& body) {
  Outcome o;
  try {
    o.text = body();
  } catch (const CoherenceError& e) {
    o.code = code_for(e);
    o.diagnostic = label + ": " + e.what();
  } catch (const std::exception& e) {
    o.code = kExitInternal;
    o.diagnostic = label + ": " + e.what();
  }
  return o;
}

std::string tsv(double x) { return format_number(x, 12); }

std::string tsv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "\t" : "") << cells[k];
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

// ---------------------------------------------------------------------------

const std::vector<std::string> kReportColumns = {
    "input", "dim", "p_n", "frobenius_distance", "center_of_mass", "bloch_norm", "visibility",
    "purity", "mu_in_given_basis", "pure_part_weight_sum", "pure_part_gap", "max_discrepancy"};

std::vector<std::string> report_row(const std::string& input, const CoherenceReport& r) {
  return {input,
          std::to_string(r.dim),
          tsv(r.p_n),
          tsv(r.frobenius_distance),
          tsv(r.center_of_mass),
          tsv(r.bloch_norm),
          tsv(r.visibility),
          tsv(r.purity),
          r.mu_in_given_basis ? tsv(*r.mu_in_given_basis) : "NA",
          tsv(r.pure_part_weight_sum),
          tsv(r.pure_part_gap),
          tsv(r.max_route_discrepancy)};
}

int cmd_report(const RunConfig& cfg, Format fmt, std::string& text, std::ostream& err) {
  struct Item {
    std::optional<CoherenceReport> report;
    Outcome outcome;
  };
  std::vector<std::future<Item>> jobs;
  jobs.reserve(cfg.inputs.size());
  for (const auto& path : cfg.inputs) {
    jobs.push_back(std::async(std::launch::async, [path, tol = cfg.tol] {
      Item item;
      item.outcome = guarded(path, [&] {
        const DensityMatrix rho = state_from_json(parse_json(read_file(path)), tol);
        item.report = coherence_report(rho);
        return std::string();
      });
      return item;
    }));
  }

  int code = kExitOk;
  Json reports = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    Item item = jobs[k].get();
    if (item.outcome.code != kExitOk) {
      err << item.outcome.diagnostic << '\n';
      code = std::max(code, item.outcome.code);
      continue;
    }
    if (fmt == Format::Tsv) {
      rows.push_back(report_row(cfg.inputs[k], *item.report));
    } else {
      Json j = report_to_json(*item.report);
      reports.push_back(std::move(j));
    }
  }
  if (fmt == Format::Tsv) {
    if (!rows.empty()) text = tsv_table(kReportColumns, rows);
  } else if (!reports.empty()) {
    text = dump_json(cfg.inputs.size() == 1 ? reports[0] : reports);
  }
  return code;
}

Outcome cmd_maximize(const RunConfig& cfg, Format fmt) {
  return guarded("maximize", [&] {
    if (cfg.inputs.size() != 1) {
      throw CoherenceError(ErrorCode::InvalidParameter, "maximize takes exactly one --input");
    }
    const DensityMatrix rho = state_from_json(parse_json(read_file(cfg.inputs.front())), cfg.tol);
    const SearchTarget target = cfg.target == "mu" ? SearchTarget::Mu : SearchTarget::VisibilityF;
    SearchOptions options;
    options.inject_analytic_seed = !cfg.haar_only;
    options.trace_stride = cfg.trace_stride > 0 ? cfg.trace_stride : std::max<std::size_t>(1, cfg.budget / 100);
    const MaximizationResult r = maximize(target, rho, cfg.budget, cfg.seed, options);
    const double analytic = target == SearchTarget::Mu ? p_n(rho) : visibility(rho);
    if (fmt == Format::Tsv) {
      return tsv_table({"target", "best_value", "analytic_value", "gap", "evaluations", "converged"},
                       {{std::string(to_string(target)), tsv(r.best_value), tsv(analytic),
                         tsv(analytic - r.best_value), std::to_string(r.evaluations),
                         r.converged ? "true" : "false"}});
    }
    Json j;
    j["result"] = maximization_to_json(r);
    j["analytic_value"] = analytic;
    j["gap"] = analytic - r.best_value;
    return dump_json(j);
  });
}

Outcome cmd_random(const RunConfig& cfg) {
  return guarded("random", [&] {
    StateKind kind = GinibreMixed{};
    if (cfg.kind == "haar_pure") kind = HaarPure{};
    if (cfg.kind == "rank_k") kind = RankK{cfg.rank};
    return dump_json(state_to_json(random_state(cfg.dim, kind, cfg.seed)));
  });
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> ladder_cutoffs(std::size_t top) {
  std::vector<std::size_t> out;
  for (std::size_t d : {top / 4, top / 2, top}) {
    if (d >= 1 && (out.empty() || d != out.back())) out.push_back(d);
  }
  return out;
}

struct RouteValue {
  std::string name;
  double value;
  std::optional<double> error_bound;
};

struct InfdimResult {
  std::string family;
  std::vector<RouteValue> routes;
  std::optional<double> reference;
  ConvergenceLadder ladder;
  std::vector<std::pair<std::size_t, double>> commutator;  // (D, deviation / hbar)
  std::vector<std::pair<std::string, std::string>> skipped;  // (route, reason)
  Json state_summary;
};

// The Wigner route carries its own normalization check; on coarse grids it is
// reported as skipped instead of failing the whole command.
void add_wigner_route(InfdimResult& r, const CvState& position) {
  const std::size_t n = position.grid().size();
  try {
    r.routes.push_back({"wigner", p_inf_wigner(wigner_from_cv(position, n, n), position.grid().hbar()), std::nullopt});
  } catch (const CoherenceError& e) {
    if (e.code() != ErrorCode::NotNormalized) throw;
    r.skipped.emplace_back("wigner", e.what());
  }
}

Json infdim_to_json(const InfdimResult& r) {
  Json j;
  j["family"] = r.family;
  Json routes = Json::object();
  for (const auto& route : r.routes) {
    Json v;
    v["value"] = route.value;
    if (route.error_bound) v["error_bound"] = *route.error_bound;
    routes[route.name] = std::move(v);
  }
  j["routes"] = std::move(routes);
  if (!r.skipped.empty()) {
    Json skipped = Json::object();
    for (const auto& [route, reason] : r.skipped) skipped[route] = reason;
    j["skipped_routes"] = std::move(skipped);
  }
  j["reference"] = r.reference ? Json(*r.reference) : Json(nullptr);
  if (!r.state_summary.is_null()) j["parameters"] = r.state_summary;
  if (!r.ladder.rungs.empty()) j["ladder"] = ladder_to_json(r.ladder);
  if (!r.commutator.empty()) {
    Json c = Json::array();
    for (const auto& [d, dev] : r.commutator) {
      Json rung;
      rung["D"] = d;
      rung["deviation_over_hbar"] = dev;
      c.push_back(std::move(rung));
    }
    j["commutator"] = std::move(c);
  }
  return j;
}

std::string infdim_to_tsv(const InfdimResult& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& route : r.routes) {
    rows.push_back({"route", route.name, tsv(route.value),
                    route.error_bound ? tsv(*route.error_bound) : "NA"});
  }
  if (r.reference) rows.push_back({"reference", r.family, tsv(*r.reference), "NA"});
  for (const auto& rung : r.ladder.rungs) {
    rows.push_back({"ladder", std::to_string(rung.cutoff), tsv(rung.value), tsv(rung.difference)});
  }
  for (const auto& [d, dev] : r.commutator) {
    rows.push_back({"commutator", std::to_string(d), tsv(dev), "NA"});
  }
  for (const auto& [route, reason] : r.skipped) rows.push_back({"skipped", route, "NA", reason});
  return tsv_table({"kind", "label", "value", "extra"}, rows);
}

InfdimResult run_cv_family(const RunConfig& cfg, bool thermal) {
  const std::size_t top = cfg.grid_d > 0 ? cfg.grid_d : 256;
  const double hbar = cfg.hbar;
  const double sigma = cfg.sigma_x > 0.0 ? cfg.sigma_x : std::sqrt(hbar / 2.0);
  const double p_top =
      cfg.p_max > 0.0 ? cfg.p_max : std::sqrt(std::numbers::pi * hbar * static_cast<double>(top));
  const auto cutoffs = ladder_cutoffs(top);
  const double p_base = p_top * std::sqrt(static_cast<double>(cutoffs.front()) / static_cast<double>(top));

  auto make_state = [&](const CvGrid& grid) {
    return thermal ? thermal_cv(cfg.nbar, grid, sigma) : gaussian_cv(sigma, cfg.x0, cfg.p0, grid);
  };

  InfdimResult r;
  r.family = thermal ? "thermal-cv" : "gaussian-cv";
  r.reference = thermal ? 1.0 / (2.0 * cfg.nbar + 1.0) : 1.0;
  if (thermal) r.reference = std::sqrt(*r.reference);
  r.ladder = cv_ladder(cutoffs, p_base, hbar, [&](const CvGrid& grid) {
    const CvState s = make_state(grid);
    r.commutator.emplace_back(grid.half_width(), commutator_check(grid, s).deviation / hbar);
    return p_inf_cv(s);
  });

  const CvGrid grid = build_cv_grid(top, ladder_p_max(top, cutoffs.front(), p_base), hbar);
  const CvState s = make_state(grid);
  r.routes.push_back({"position", p_inf_cv(s), std::nullopt});
  r.routes.push_back({"momentum", p_inf_cv(s.to_momentum()), std::nullopt});
  add_wigner_route(r, s);

  r.state_summary["D"] = top;
  r.state_summary["p_max"] = grid.p_max();
  r.state_summary["hbar"] = hbar;
  r.state_summary["delta_x"] = grid.delta_x();
  r.state_summary["delta_p"] = grid.delta_p();
  r.state_summary["sigma_x"] = sigma;
  if (thermal) {
    r.state_summary["nbar"] = cfg.nbar;
  } else {
    r.state_summary["x0"] = cfg.x0;
    r.state_summary["p0"] = cfg.p0;
  }
  return r;
}

InfdimResult run_family(const RunConfig& cfg) {
  const std::string& family = cfg.family;
  InfdimResult r;
  r.family = family;
  if (family == "geometric-oam") {
    const std::size_t top = cfg.grid_d > 0 ? cfg.grid_d : 60;
    const OamState s = geometric_oam(cfg.q, top);
    const TruncatedEstimate est = p_inf_oam(s);
    r.routes.push_back({"oam", est.value, est.error_bound});
    r.routes.push_back({"angle", p_inf_angle(oam_to_angle(s, cfg.grid_m)), std::nullopt});
    r.reference = std::sqrt((1.0 - cfg.q) / (1.0 + cfg.q));
    r.ladder = truncation_ladder(ladder_cutoffs(top), [&](std::size_t d) {
      return p_inf_oam(geometric_oam(cfg.q, d)).value;
    });
    r.state_summary["q"] = cfg.q;
    r.state_summary["D"] = top;
    r.state_summary["M"] = cfg.grid_m;
    r.state_summary["tail_bound"] = s.tail_bound();
  } else if (family == "thermal-fock" || family == "coherent-fock") {
    const bool thermal = family == "thermal-fock";
    const std::size_t top = cfg.grid_d > 0 ? cfg.grid_d : (thermal ? 80 : 40);
    auto make = [&](std::size_t d) {
      return thermal ? thermal_fock(cfg.nbar, d) : coherent_fock(Complex(cfg.alpha, 0.0), d);
    };
    const FockState s = make(top);
    const TruncatedEstimate est = p_inf_fock(s);
    r.routes.push_back({"fock", est.value, est.error_bound});
    r.reference = thermal ? std::sqrt(1.0 / (2.0 * cfg.nbar + 1.0)) : 1.0;
    r.ladder = truncation_ladder(ladder_cutoffs(top), [&](std::size_t d) { return p_inf_fock(make(d)).value; });
    if (thermal) {
      r.state_summary["nbar"] = cfg.nbar;
    } else {
      r.state_summary["alpha"] = cfg.alpha;
    }
    r.state_summary["D"] = top;
    r.state_summary["tail_bound"] = s.tail_bound();
  } else if (family == "gaussian-cv") {
    r = run_cv_family(cfg, false);
  } else if (family == "thermal-cv") {
    r = run_cv_family(cfg, true);
  } else {
    throw CoherenceError(ErrorCode::InvalidParameter, "unknown family " + family);
  }
  return r;
}

// P_inf of a representation-tagged state file.
InfdimResult run_state_file(const RunConfig& cfg) {
  const Json j = parse_json(read_file(cfg.inputs.front()));
  if (!j.is_object() || !j.contains("representation") || !j["representation"].is_string()) {
    throw CoherenceError(ErrorCode::ParseError, "state file lacks a \"representation\" tag");
  }
  const std::string rep = j["representation"].get<std::string>();
  InfdimResult r;
  r.family = "file:" + rep;
  if (rep == "oam") {
    const OamState s = oam_from_json(j);
    const TruncatedEstimate est = p_inf_oam(s);
    r.routes.push_back({"oam", est.value, est.error_bound});
    const std::size_t m = std::max(cfg.grid_m, 2 * (2 * s.cutoff() + 1));
    r.routes.push_back({"angle", p_inf_angle(oam_to_angle(s, m)), std::nullopt});
  } else if (rep == "fock") {
    const TruncatedEstimate est = p_inf_fock(fock_from_json(j));
    r.routes.push_back({"fock", est.value, est.error_bound});
  } else {
    const CvState s = cv_from_json(j);
    const CvState pos = s.to_position();
    r.routes.push_back({"position", p_inf_cv(pos), std::nullopt});
    r.routes.push_back({"momentum", p_inf_cv(s.to_momentum()), std::nullopt});
    add_wigner_route(r, pos);
    r.commutator.emplace_back(s.grid().half_width(),
                              commutator_check(s.grid(), s).deviation / s.grid().hbar());
  }
  return r;
}

Outcome cmd_infdim(const RunConfig& cfg, Format fmt) {
  return guarded("infdim", [&] {
    if (cfg.family.empty() == cfg.inputs.empty()) {
      throw CoherenceError(ErrorCode::InvalidParameter, "give exactly one of --family or --input");
    }
    if (cfg.inputs.size() > 1) {
      throw CoherenceError(ErrorCode::InvalidParameter, "infdim takes at most one --input");
    }
    const InfdimResult r = cfg.family.empty() ? run_state_file(cfg) : run_family(cfg);
    return fmt == Format::Tsv ? infdim_to_tsv(r) : dump_json(infdim_to_json(r));
  });
}

int emit(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err) {
  if (text.empty()) return kExitOk;
  if (cfg.output.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  f << text;
  if (!f) {
    err << "cannot write " << cfg.output << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Intrinsic degree of coherence of finite- and infinite-dimensional states"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output,-o", cfg.output, "Output file (default: standard output)");
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "tsv"}))
        ->capture_default_str();
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Validation tolerance")
        ->check(CLI::Range(0.0, 1e-3))
        ->capture_default_str();
  };

  CLI::App* report = app.add_subcommand("report", "Coherence report for one or more state files");
  report->add_option("--input,-i", cfg.inputs, "State file(s)")->required()->check(CLI::ExistingFile);
  add_tol(report);
  add_common(report);

  CLI::App* maximize_cmd = app.add_subcommand("maximize", "Search U(N) for the maximum of mu_N or f");
  maximize_cmd->add_option("--input,-i", cfg.inputs, "State file")->required()->check(CLI::ExistingFile);
  maximize_cmd->add_option("--target", cfg.target, "Objective")
      ->check(CLI::IsMember({"mu", "visibility"}))
      ->capture_default_str();
  maximize_cmd->add_option("--budget", cfg.budget, "Objective evaluations")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}))
      ->capture_default_str();
  maximize_cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  maximize_cmd->add_option("--trace-stride", cfg.trace_stride, "Trace stride (default budget/100)");
  maximize_cmd->add_flag("--haar-only", cfg.haar_only, "Do not seed with the analytic maximizer");
  add_tol(maximize_cmd);
  add_common(maximize_cmd);

  CLI::App* infdim = app.add_subcommand("infdim", "P_inf of an infinite-dimensional state family or file");
  infdim->add_option("--family", cfg.family, "State family")
      ->check(CLI::IsMember({"geometric-oam", "thermal-fock", "coherent-fock", "gaussian-cv", "thermal-cv"}));
  infdim->add_option("--input,-i", cfg.inputs, "Representation-tagged state file")->check(CLI::ExistingFile);
  infdim->add_option("--grid-d", cfg.grid_d, "Cutoff D (top ladder rung)")->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  infdim->add_option("--p-max", cfg.p_max, "Momentum bound at the top rung (default sqrt(pi hbar D))")
      ->check(CLI::PositiveNumber);
  infdim->add_option("--grid-m", cfg.grid_m, "Angle grid size")
      ->check(CLI::Range(std::size_t{2}, std::size_t{65536}))
      ->capture_default_str();
  infdim->add_option("--hbar", cfg.hbar, "Reduced Planck constant")->check(CLI::PositiveNumber)->capture_default_str();
  infdim->add_option("--q", cfg.q, "Geometric OAM ratio")->check(CLI::Range(1e-12, 1.0 - 1e-12))->capture_default_str();
  infdim->add_option("--nbar", cfg.nbar, "Mean thermal occupation")->check(CLI::PositiveNumber)->capture_default_str();
  infdim->add_option("--alpha", cfg.alpha, "Coherent amplitude (real)")->check(CLI::Range(-20.0, 20.0))->capture_default_str();
  infdim->add_option("--sigma-x", cfg.sigma_x, "Position width (default sqrt(hbar/2))")->check(CLI::PositiveNumber);
  infdim->add_option("--x0", cfg.x0, "Gaussian centre")->capture_default_str();
  infdim->add_option("--p0", cfg.p0, "Gaussian mean momentum")->capture_default_str();
  add_common(infdim);

  CLI::App* random = app.add_subcommand("random", "Write a seeded random state file");
  random->add_option("--dim", cfg.dim, "Dimension N")->check(CLI::Range(std::size_t{2}, std::size_t{64}))->capture_default_str();
  random->add_option("--kind", cfg.kind, "Ensemble")
      ->check(CLI::IsMember({"haar_pure", "ginibre_mixed", "rank_k"}))
      ->capture_default_str();
  random->add_option("--rank", cfg.rank, "Rank for rank_k")->check(CLI::Range(std::size_t{1}, std::size_t{64}))->capture_default_str();
  random->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  add_common(random);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  const Format fmt = cfg.format == "tsv" ? Format::Tsv : Format::Json;
  if (report->parsed()) {
    std::string text;
    const int code = cmd_report(cfg, fmt, text, err);
    const int wrote = emit(cfg, text, out, err);
    return std::max(code, wrote);
  }
  Outcome o;
  if (maximize_cmd->parsed()) o = cmd_maximize(cfg, fmt);
  else if (infdim->parsed()) o = cmd_infdim(cfg, fmt);
  else o = cmd_random(cfg);
  if (o.code != kExitOk) {
    err << o.diagnostic << '\n';
    return o.code;
  }
  return emit(cfg, o.text, out, err);
}

}  // namespace coherence::cli
