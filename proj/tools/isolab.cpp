// isolab: command-line front end for the isomorphism-structure laboratory.
//
// Subcommands: check, enumerate, witness, select, trace, estimate, rate.
// Inputs are matrix text files or generator specs "gen:kind:n[:param][:seed]".
// Exit codes: 0 success, 2 invalid input, 3 size cap exceeded, 4 failed
// trace or certificate.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isolab/isolab.hpp"
#include "isolab/serialize.hpp"

namespace {

using namespace isolab;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_input, "bad number '" + tok + "' in list");
    }
  }
  if (out.empty())
    throw Error(ErrorKind::invalid_input, "empty numeric list '" + text + "'");
  return out;
}

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_input, "bad index '" + tok + "' in subset");
    }
  }
  return out;
}

EnsembleSpec parse_generator_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() < 3 || parts[0] != "gen")
    throw Error(ErrorKind::invalid_input,
                "generator spec must look like gen:kind:n[:param][:seed]");
  EnsembleSpec spec;
  const std::string& kind = parts[1];
  if (kind == "identity")
    spec.kind = EnsembleKind::identity;
  else if (kind == "doubling")
    spec.kind = EnsembleKind::doubling;
  else if (kind == "pair_correlation")
    spec.kind = EnsembleKind::pair_correlation;
  else if (kind == "uniform_correlation")
    spec.kind = EnsembleKind::uniform_correlation;
  else if (kind == "gaussian_normalized")
    spec.kind = EnsembleKind::gaussian_normalized;
  else if (kind == "rank_deficient")
    spec.kind = EnsembleKind::rank_deficient;
  else
    throw Error(ErrorKind::invalid_input, "unknown ensemble kind '" + kind + "'");

  try {
    spec.n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_input, "bad dimension '" + parts[2] + "'");
  }

  const bool takes_param = spec.kind == EnsembleKind::pair_correlation ||
                           spec.kind == EnsembleKind::uniform_correlation ||
                           spec.kind == EnsembleKind::rank_deficient;
  std::size_t next = 3;
  try {
    if (takes_param) {
      if (parts.size() <= next)
        throw Error(ErrorKind::invalid_input, "ensemble kind '" + kind + "' needs a parameter");
      spec.param = std::stod(parts[next++]);
    }
    if (parts.size() > next) spec.seed = std::stoull(parts[next++]);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_input, "bad generator spec '" + text + "'");
  }
  if (parts.size() > next)
    throw Error(ErrorKind::invalid_input, "trailing fields in generator spec '" + text + "'");
  spec.validate();
  return spec;
}

Matrix load_operator(const std::string& input, std::uint64_t seed_override,
                     bool seed_given) {
  if (input.rfind("gen:", 0) == 0) {
    EnsembleSpec spec = parse_generator_spec(input);
    if (seed_given) spec.seed = seed_override;
    spec.count = 1;
    return generate(spec).front();
  }
  std::ifstream file(input);
  if (!file)
    throw Error(ErrorKind::invalid_input, "cannot open matrix file '" + input + "'");
  return parse_matrix(file);
}

IndexMeasure load_measure(const std::string& mu_spec, int n) {
  if (mu_spec == "counting") return IndexMeasure::counting(n);
  if (mu_spec.rfind("file:", 0) == 0) {
    const std::string path = mu_spec.substr(5);
    std::ifstream file(path);
    if (!file)
      throw Error(ErrorKind::invalid_input, "cannot open weights file '" + path + "'");
    std::vector<double> weights;
    double v = 0.0;
    while (file >> v) weights.push_back(v);
    if (static_cast<int>(weights.size()) != n)
      throw Error(ErrorKind::invalid_input,
                  "weights file has " + std::to_string(weights.size()) +
                      " entries, expected " + std::to_string(n));
    return IndexMeasure::general(std::move(weights));
  }
  throw Error(ErrorKind::invalid_input,
              "measure spec must be 'counting' or 'file:PATH', got '" + mu_spec + "'");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file)
    throw Error(ErrorKind::invalid_input, "cannot open output file '" + out_path + "'");
  file << text;
}

std::vector<double> column_sq_weights(const Matrix& t) {
  std::vector<double> w(static_cast<std::size_t>(t.cols()));
  for (int i = 0; i < t.cols(); ++i) {
    const double cn = t.column_norm(i);
    w[static_cast<std::size_t>(i)] = cn * cn;
  }
  return w;
}

struct CommonArgs {
  std::string input;
  std::string out;
  std::string format = "json";
  std::string mu_spec = "counting";
  double epsilon = 0.5;
  double delta = 0.0;
  double c_bound = 2.0;
  double tol = kBoundaryTol;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool delta_given = false;
};

int run_check(const CommonArgs& args, const std::string& sigma_spec) {
  const Matrix m = load_operator(args.input, args.seed, args.seed_given);
  SubsetMask sigma = sigma_spec.empty()
                         ? SubsetMask::full(m.cols())
                         : SubsetMask::from_indices(m.cols(), parse_index_list(sigma_spec));
  json out;
  if (args.delta_given) {
    const bool member = check_suppression(m, args.delta, sigma, args.tol);
    const Matrix sub = principal_submatrix(m, sigma);
    out["member"] = member;
    out["delta"] = args.delta;
    out["sigma"] = mask_to_json(sigma);
    out["submatrix_norm"] = operator_norm(sub);
    out["threshold"] = args.delta * operator_norm(m);
  } else {
    const bool member = check_isomorphism(m, args.epsilon, sigma, args.tol);
    const SubsetMask active = sigma.set_minus(zero_columns(m));
    json spectrum = json::array();
    if (active.size() >= 1)
      for (double v : sym_eigs(gram_normalized(m, active)).eigenvalues)
        spectrum.push_back(v);
    out["member"] = member;
    out["epsilon"] = args.epsilon;
    out["sigma"] = mask_to_json(sigma);
    out["gram_spectrum"] = spectrum;
  }
  if (args.format == "json") {
    emit(out.dump(2), args.out);
  } else {
    std::string text = std::string("member: ") + (out["member"].get<bool>() ? "true" : "false") + "\n";
    if (out.contains("gram_spectrum")) {
      text += "gram spectrum:";
      for (const json& v : out["gram_spectrum"]) text += " " + format_double(v.get<double>());
      text += "\n";
    } else {
      text += "submatrix norm: " + format_double(out["submatrix_norm"].get<double>()) +
              " threshold: " + format_double(out["threshold"].get<double>()) + "\n";
    }
    emit(text, args.out);
  }
  return 0;
}

int run_enumerate(const CommonArgs& args) {
  const Matrix m = load_operator(args.input, args.seed, args.seed_given);
  const IsoFamily family =
      args.delta_given ? enumerate_suppression_family(m, args.delta, args.tol)
                       : enumerate_isomorphism_family(m, args.epsilon, args.tol);
  emit(family_to_json(family).dump(2), args.out);
  return 0;
}

int run_witness(const CommonArgs& args) {
  const Matrix m = load_operator(args.input, args.seed, args.seed_given);
  IsoFamily family;
  std::vector<double> weights;
  BoundReport report;
  WitnessMeasure w;
  if (args.delta_given) {
    family = enumerate_suppression_family(m, args.delta, args.tol);
    weights.assign(static_cast<std::size_t>(m.cols()), 1.0);
    w = solve_game(build_game(family, weights));
    report = suppression_bound_report(args.delta, w);
  } else {
    family = enumerate_isomorphism_family(m, args.epsilon, args.tol);
    weights = column_sq_weights(m);
    w = solve_game(build_game(family, weights));
    report = theorem2_bound_report(m, args.epsilon, w);
  }
  emit(witness_to_json(w, report.min_ratio).dump(2), args.out);
  return 0;
}

int run_select(const CommonArgs& args, const std::string& method) {
  Matrix m = load_operator(args.input, args.seed, args.seed_given);
  const NormalizedOperator norm_op = normalize_operator(m);
  if (norm_op.was_scaled)
    std::cerr << "note: operator scaled by " << format_double(norm_op.scale)
              << " to reach norm one\n";
  const IndexMeasure mu = load_measure(args.mu_spec, norm_op.matrix.cols());
  const SelectionResult result =
      method == "greedy"
          ? select_greedy(norm_op.matrix, args.epsilon, mu, args.tol)
          : select_exhaustive(norm_op.matrix, args.epsilon, mu, args.tol);
  const SelectionReports reports =
      bound_reports(norm_op.matrix, args.epsilon, mu, result, args.tol);
  emit(selection_to_json(result, reports).dump(2), args.out);
  return 0;
}

int run_trace(const CommonArgs& args) {
  const Matrix m = load_operator(args.input, args.seed, args.seed_given);
  const IndexMeasure mu = load_measure(args.mu_spec, m.cols());
  const ProofTrace trace = run_pipeline(m, args.epsilon, mu, args.c_bound, args.tol);
  emit(trace_to_json(trace).dump(2), args.out);
  if (!trace.passed()) {
    std::cerr << "trace failed: see the inequality ledger\n";
    return 4;
  }
  return 0;
}

int run_estimate(const CommonArgs& args, const std::string& eps_list,
                 const std::string& c_list, int count) {
  if (args.input.rfind("gen:", 0) != 0)
    throw Error(ErrorKind::invalid_input, "estimate needs a generator spec input");
  EnsembleSpec spec = parse_generator_spec(args.input);
  if (args.seed_given) spec.seed = args.seed;
  spec.count = count;
  const EstimateReport report =
      estimate_constants({spec}, parse_double_list(eps_list), parse_double_list(c_list));
  emit(args.format == "tsv" ? estimate_plot_tsv(report) : estimate_csv(report),
       args.out);
  return 0;
}

int run_rate(const CommonArgs& args, long trials) {
  if (args.input.rfind("gen:", 0) != 0)
    throw Error(ErrorKind::invalid_input, "rate needs a generator spec input");
  const EnsembleSpec spec = parse_generator_spec(args.input);
  const RateResult r = random_subset_rate(spec, args.epsilon, trials, args.seed);
  const json out{
      {"n", r.n},           {"colliding_pairs", r.pairs}, {"exact", r.exact},
      {"estimate", r.estimate}, {"trials", r.trials},     {"hits", r.hits},
      {"seed", r.seed},
  };
  emit(out.dump(2), args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for isomorphism structures of linear operators"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string sigma_spec;
  std::string method = "exhaustive";
  std::string eps_list = "0.2,0.5,0.8";
  std::string c_list = "2";
  int count = 1;
  long trials = 10000;

  auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
    if (needs_input)
      cmd->add_option("input", args.input,
                      "matrix file or generator spec gen:kind:n[:param][:seed]")
          ->required();
    cmd->add_option("--out", args.out, "output path (default: stdout)");
    cmd->add_option("--tol", args.tol, "membership boundary tolerance");
    auto* seed = cmd->add_option("--seed", args.seed, "seed override for generator inputs");
    cmd->parse_complete_callback([&, seed] { args.seed_given = seed->count() > 0; });
  };

  CLI::App* check = app.add_subcommand("check", "membership verdict for one subset");
  add_common(check);
  check->add_option("--epsilon", args.epsilon, "isomorphism band half-width in (0,1)");
  auto* check_delta = check->add_option("--delta", args.delta, "suppression factor (> 0)");
  check->add_option("--sigma", sigma_spec, "comma-separated zero-based indices (default: full)");
  check->add_option("--format", args.format, "json|text")->check(CLI::IsMember({"json", "text"}));

  CLI::App* enumerate = app.add_subcommand("enumerate", "maximal sets of the family");
  add_common(enumerate);
  enumerate->add_option("--epsilon", args.epsilon, "isomorphism band half-width");
  auto* enum_delta = enumerate->add_option("--delta", args.delta, "suppression factor");

  CLI::App* witness = app.add_subcommand("witness", "witness measure with duality certificate");
  add_common(witness);
  witness->add_option("--epsilon", args.epsilon, "isomorphism band half-width");
  auto* wit_delta = witness->add_option("--delta", args.delta, "suppression factor");

  CLI::App* select = app.add_subcommand("select", "largest member set under a measure");
  add_common(select);
  select->add_option("--epsilon", args.epsilon, "isomorphism band half-width");
  select->add_option("--method", method, "exhaustive|greedy")
      ->check(CLI::IsMember({"exhaustive", "greedy"}));
  select->add_option("--mu", args.mu_spec, "counting | file:PATH");

  CLI::App* trace = app.add_subcommand("trace", "norm-reduction + suppression pipeline ledger");
  add_common(trace);
  trace->add_option("--epsilon", args.epsilon, "isomorphism band half-width");
  trace->add_option("--C", args.c_bound, "norm bound parameter (> 1)");
  trace->add_option("--mu", args.mu_spec, "counting | file:PATH");

  CLI::App* estimate = app.add_subcommand("estimate", "empirical constants over an ensemble");
  add_common(estimate);
  estimate->add_option("--epsilon", eps_list, "comma-separated epsilon grid");
  estimate->add_option("--C", c_list, "comma-separated norm-bound grid");
  estimate->add_option("--count", count, "samples per ensemble");
  estimate->add_option("--format", args.format, "csv|tsv")
      ->check(CLI::IsMember({"csv", "tsv"}));

  CLI::App* rate = app.add_subcommand("rate", "random-subset membership rate (doubling)");
  add_common(rate);
  rate->add_option("--epsilon", args.epsilon, "isomorphism band half-width");
  rate->add_option("--trials", trials, "Monte-Carlo trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << e.what() << "\n";
    return 2;
  }

  args.delta_given = check_delta->count() > 0 || enum_delta->count() > 0 ||
                     wit_delta->count() > 0;
  if (app.got_subcommand("estimate") && args.format == "json") args.format = "csv";

  try {
    if (app.got_subcommand("check")) return run_check(args, sigma_spec);
    if (app.got_subcommand("enumerate")) return run_enumerate(args);
    if (app.got_subcommand("witness")) return run_witness(args);
    if (app.got_subcommand("select")) return run_select(args, method);
    if (app.got_subcommand("trace")) return run_trace(args);
    if (app.got_subcommand("estimate")) return run_estimate(args, eps_list, c_list, count);
    if (app.got_subcommand("rate")) return run_rate(args, trials);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
