#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixchain/cli.hpp"
#include "mixchain/closed_forms.hpp"
#include "mixchain/mc_oracle.hpp"
#include "mixchain/mixing.hpp"
#include "mixchain/passage.hpp"

namespace mixchain::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularSystem:
    case ErrorCode::InvariantViolation:
      return kExitInvariant;
    default:
      return kExitInvalid;
  }
}

namespace {

std::size_t nmax_cap() {
  if (const char* env = std::getenv("MIXCHAIN_NMAX_CAP"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) {
      throw Error(ErrorCode::InvalidArgument, "MIXCHAIN_NMAX_CAP must be a positive integer");
    }
    return std::size_t(v);
  }
  return kDefaultNCap;
}

Truncation truncation(std::optional<std::size_t> nmax) {
  const std::size_t cap = nmax_cap();
  if (!nmax) return Truncation::adaptive(cap);
  if (*nmax == 0) throw Error(ErrorCode::InvalidArgument, "--nmax must be at least 1");
  if (*nmax > cap) {
    throw Error(ErrorCode::InvalidArgument,
                "--nmax " + std::to_string(*nmax) + " exceeds the cap " + std::to_string(cap));
  }
  Truncation t = Truncation::fixed(*nmax);
  t.n_cap = cap;
  return t;
}

std::size_t state_index(std::size_t one_based, const TransitionMatrix& chain, const char* what) {
  if (one_based < 1 || one_based > chain.size()) {
    throw Error(ErrorCode::StateOutOfRange, std::string(what) + " " + std::to_string(one_based) +
                                                " outside 1.." + std::to_string(chain.size()));
  }
  return one_based - 1;
}

MixingVariant parse_variant(const std::string& s) {
  if (s == "hit") return MixingVariant::hit;
  if (s == "pass") return MixingVariant::pass;
  throw Error(ErrorCode::InvalidArgument, "--variant must be hit or pass");
}

void write_table(std::ostream& out, const DistributionTable& t) {
  out << "n,probability,cumulative\n";
  double cum = 0.0;
  for (std::size_t n = t.support_offset; n <= t.n_max(); ++n) {
    cum += t.probs[n];
    out << n << ',' << fmt(t.probs[n]) << ',' << fmt(cum) << '\n';
  }
  out << "tail," << fmt(t.tail_mass) << ',' << fmt(cum + t.tail_mass) << '\n';
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string file;
  bool json = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto chain = load_chain_file(a.file);
  const auto structure = classify(chain);
  require_irreducible(chain);
  const auto pi = stationary(chain);
  const auto z = fundamental_matrix(chain, pi);
  const auto mfp = mean_first_passage(chain, pi, z);
  const auto means = expected_mixing(chain, pi, mfp);

  if (a.json) {
    nlohmann::json j;
    j["states"] = chain.size();
    j["irreducible"] = structure.irreducible;
    j["period"] = structure.period;
    j["regular"] = structure.regular;
    j["pi"] = std::vector<double>(pi.pi.data(), pi.pi.data() + pi.pi.size());
    j["tau"] = means.tau;
    j["eta"] = means.eta;
    j["kemeny"] = means.kemeny;
    j["per_state_eta"] = means.per_state_eta;
    j["spread"] = means.spread;
    j["mfp_cross_check"] = mfp.cross_check;
    j["notes"] = chain.notes();
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "states: " << chain.size() << '\n';
  out << "irreducible: yes\n";
  out << "period: " << structure.period << '\n';
  out << "regular: " << (structure.regular ? "yes" : "no") << '\n';
  out << "pi:";
  for (std::size_t j = 0; j < pi.size(); ++j) out << ' ' << fmt(pi[j]);
  out << '\n';
  out << "tau: " << fmt(means.tau) << '\n';
  out << "eta: " << fmt(means.eta) << '\n';
  out << "kemeny: " << fmt(means.kemeny) << '\n';
  out << "per-state spread: " << fmt(means.spread) << '\n';
  out << "mfp cross-check: " << fmt(mfp.cross_check) << '\n';
  for (const auto& note : chain.notes()) out << "note: " << note << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PassageArgs {
  std::string file;
  std::size_t from = 1;
  std::size_t to = 1;
  std::optional<std::size_t> nmax;
};

int cmd_passage(const PassageArgs& a, std::ostream& out, std::ostream& err) {
  const auto chain = load_chain_file(a.file);
  const std::size_t i = state_index(a.from, chain, "--from");
  const std::size_t j = state_index(a.to, chain, "--to");
  const auto trunc = truncation(a.nmax);
  const auto rec = fp_dist_recurrence(chain, i, j, trunc);
  const auto series = fp_dist_series(chain, i, j, Truncation::fixed(rec.n_max()));
  const double gap = max_table_gap(rec, series);
  if (gap > kCrossCheckTol) {
    err << "InvariantViolation: taboo recurrence and adjugate series differ by " << fmt(gap)
        << " (tolerance " << fmt(kCrossCheckTol) << ")\n";
    return kExitInvariant;
  }
  write_table(out, rec);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct MixingArgs {
  std::string file;
  std::size_t start = 1;
  std::string variant = "hit";
  std::optional<std::size_t> nmax;
};

int cmd_mixing(const MixingArgs& a, std::ostream& out) {
  const auto chain = load_chain_file(a.file);
  require_irreducible(chain);
  const std::size_t i = state_index(a.start, chain, "--start");
  const auto variant = parse_variant(a.variant);
  const auto pi = stationary(chain);
  const auto z = fundamental_matrix(chain, pi);
  const auto means = expected_mixing(chain, pi, mean_first_passage(chain, pi, z));
  const double target = variant == MixingVariant::hit ? means.tau : means.eta;
  const auto t = mixing_dist(chain, pi, i, variant, truncation(a.nmax));

  out << "n,probability,cumulative,partial_mean,target_mean\n";
  double cum = 0.0, mean = 0.0;
  for (std::size_t n = t.support_offset; n <= t.n_max(); ++n) {
    cum += t.probs[n];
    mean += double(n) * t.probs[n];
    out << n << ',' << fmt(t.probs[n]) << ',' << fmt(cum) << ',' << fmt(mean) << ','
        << fmt(target) << '\n';
  }
  out << "tail," << fmt(t.tail_mass) << ',' << fmt(cum + t.tail_mass) << ',' << fmt(mean) << ','
      << fmt(target) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CaseArgs {
  std::string name;
  std::vector<double> params;
  std::string emit = "both";
  std::string out_dir;
  std::size_t nmax = 200;
};

int cmd_case(const CaseArgs& a, std::ostream& out) {
  if (a.emit != "chain" && a.emit != "golden" && a.emit != "both") {
    throw Error(ErrorCode::InvalidArgument, "--emit must be chain, golden or both");
  }
  if (a.nmax == 0 || a.nmax > nmax_cap()) {
    throw Error(ErrorCode::InvalidArgument, "--nmax must lie in 1.." + std::to_string(nmax_cap()));
  }
  const auto fixture = closed_forms::paper_case(a.name, a.params, a.nmax);
  const bool chain_out = a.emit != "golden";
  const bool golden_out = a.emit != "chain";

  auto emit = [&](const std::string& file, const auto& write) {
    if (a.out_dir.empty()) {
      out << "# " << file << '\n';
      write(out);
      return;
    }
    const auto path = std::filesystem::path(a.out_dir) / file;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
    write(f);
    out << path.string() << '\n';
  };

  if (!a.out_dir.empty()) std::filesystem::create_directories(a.out_dir);
  if (chain_out) {
    const auto m = fixture.chain.matrix();
    emit(a.name + ".chain", [&](std::ostream& o) { o << format_chain(m); });
  }
  if (golden_out) {
    emit(a.name + "_hit.csv", [&](std::ostream& o) { write_table(o, fixture.golden_hit); });
    emit(a.name + "_pass.csv", [&](std::ostream& o) { write_table(o, fixture.golden_pass); });
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct Graph1Args {
  std::vector<double> epsilons{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::size_t nmax = 20;
};

int cmd_graph1(const Graph1Args& a, std::ostream& out, std::ostream& err) {
  for (double eps : a.epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw Error(ErrorCode::EpsilonOutOfRange, "epsilon " + fmt(eps) + " outside (0, 1)");
    }
  }
  const auto trunc = truncation(a.nmax);
  std::ostringstream body;
  body << "epsilon,n,f_1n\n";
  for (double eps : a.epsilons) {
    const double params[] = {eps};
    const auto fixture = closed_forms::paper_case("case5", params, a.nmax);
    const auto chain = fixture.chain.matrix();
    const auto pi = stationary(chain);
    const auto t = mixing_hit_dist(chain, pi, 0, trunc);
    const double gap = max_table_gap(t, fixture.golden_hit);
    if (gap > kCrossCheckTol) {
      err << "InvariantViolation: epsilon " << fmt(eps) << ": pipeline and closed form differ by "
          << fmt(gap) << '\n';
      return kExitInvariant;
    }
    for (std::size_t n = 0; n <= t.n_max(); ++n) {
      body << fmt(eps) << ',' << n << ',' << fmt(t.probs[n]) << '\n';
    }
  }
  out << body.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string file;
  std::size_t start = 1;
  std::string variant = "hit";
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto chain = load_chain_file(a.file);
  require_irreducible(chain);
  SimConfig cfg;
  cfg.start = state_index(a.start, chain, "--start");
  cfg.variant = parse_variant(a.variant);
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.n_cap = nmax_cap();
  cfg.workers = a.workers;
  const auto pi = stationary(chain);
  const auto z = fundamental_matrix(chain, pi);
  const auto means = expected_mixing(chain, pi, mean_first_passage(chain, pi, z));
  const auto analytic = mixing_dist(chain, pi, cfg.start, cfg.variant, Truncation::adaptive(cfg.n_cap));
  const auto emp = simulate(chain, pi, cfg);
  const auto report = compare(emp, analytic);
  const double target = cfg.variant == MixingVariant::hit ? means.tau : means.eta;

  out << "# rng: " << emp.rng_id << '\n';
  out << "# seed: " << emp.seed << '\n';
  out << "# trials: " << emp.trials << '\n';
  out << "# variant: " << variant_name(cfg.variant) << '\n';
  out << "# start: " << a.start << '\n';
  out << "# n_cap: " << cfg.n_cap << '\n';
  out << "# mean: " << fmt(emp.mean()) << " se " << fmt(emp.mean_se()) << " target " << fmt(target)
      << '\n';
  out << "# max_abs_z: " << fmt(report.max_abs_z) << '\n';
  out << "# max_abs_diff: " << fmt(report.max_abs_diff) << '\n';
  out << "# " << report.note << '\n';
  out << "# result: " << (report.passed ? "pass" : "fail") << '\n';
  out << "n,count,freq,analytic,z\n";
  std::size_t last = 0;
  for (const auto& b : report.bins) {
    if (b.count > 0 || b.analytic * double(emp.trials) >= kMinExpected) last = b.n;
  }
  for (const auto& b : report.bins) {
    if (b.n > last) break;
    out << b.n << ',' << b.count << ',' << fmt(b.freq) << ',' << fmt(b.analytic) << ','
        << fmt(b.z) << '\n';
  }
  out << "pooled," << report.pooled_count << ',' << fmt(double(report.pooled_count) / double(emp.trials))
      << ',' << fmt(report.pooled_analytic) << ',' << fmt(report.pooled_z) << '\n';
  return report.passed ? kExitOk : kExitStatistical;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixing, first-passage and recurrence time distributions of finite Markov chains",
               "mixchain"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* sa = app.add_subcommand("analyze", "Stationary vector, structure, tau, eta, Kemeny constant");
  sa->add_option("file", analyze.file, "Chain file")->required();
  sa->add_flag("--json", analyze.json, "JSON summary");

  PassageArgs passage;
  auto* sp = app.add_subcommand("passage", "First-passage distribution f_ij^(n)");
  sp->add_option("file", passage.file, "Chain file")->required();
  sp->add_option("--from", passage.from, "Start state (1-based)")->required();
  sp->add_option("--to", passage.to, "Target state (1-based)")->required();
  sp->add_option("--nmax", passage.nmax, "Horizon (adaptive when omitted)");

  MixingArgs mixing;
  auto* sm = app.add_subcommand("mixing", "Mixing-time distribution f_{i,n} or g_{i,n}");
  sm->add_option("file", mixing.file, "Chain file")->required();
  sm->add_option("--start", mixing.start, "Start state (1-based)")->required();
  sm->add_option("--variant", mixing.variant, "hit or pass")->default_val("hit");
  sm->add_option("--nmax", mixing.nmax, "Horizon (adaptive when omitted)");

  CaseArgs cs;
  auto* sc = app.add_subcommand("case", "Named three-state fixtures: chain file and golden tables");
  sc->add_option("name", cs.name, "case1 .. case5")->required();
  sc->add_option("params", cs.params, "Case parameters");
  sc->add_option("--emit", cs.emit, "chain, golden or both")->default_val("both");
  sc->add_option("--out", cs.out_dir, "Output directory (stdout when omitted)");
  sc->add_option("--nmax", cs.nmax, "Golden table horizon")->default_val(200);

  Graph1Args g1;
  auto* sg = app.add_subcommand("graph1", "f_{1,n} of the symmetric cyclic-drift chain, long format");
  sg->add_option("--epsilons", g1.epsilons, "Comma-separated epsilon values")->delimiter(',');
  sg->add_option("--nmax", g1.nmax, "Largest n")->default_val(20);

  SimulateArgs sim;
  auto* ss = app.add_subcommand("simulate", "Monte Carlo mixing times compared against the exact table");
  ss->add_option("file", sim.file, "Chain file")->required();
  ss->add_option("--start", sim.start, "Start state (1-based)")->required();
  ss->add_option("--variant", sim.variant, "hit or pass")->default_val("hit");
  ss->add_option("--trials", sim.trials, "Number of trials")->default_val(100000);
  ss->add_option("--seed", sim.seed, "RNG seed")->default_val(1);
  ss->add_option("--workers", sim.workers, "Threads (0: hardware concurrency)")->default_val(0);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*sa) return cmd_analyze(analyze, out);
    if (*sp) return cmd_passage(passage, out, err);
    if (*sm) return cmd_mixing(mixing, out);
    if (*sc) return cmd_case(cs, out);
    if (*sg) return cmd_graph1(g1, out, err);
    if (*ss) return cmd_simulate(sim, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace mixchain::cli
