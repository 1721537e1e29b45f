#include "partlab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "partlab/deletion.hpp"
#include "partlab/eppf.hpp"
#include "partlab/json_io.hpp"
#include "partlab/kernels.hpp"
#include "partlab/oracle.hpp"
#include "partlab/regen.hpp"
#include "partlab/samplers.hpp"

namespace partlab::cli {

namespace {

struct RunConfig {
  std::string subcommand;
  std::string alpha;
  std::string theta;
  std::string tau;
  std::string xi;
  unsigned types = 0;
  std::string lambda;
  std::string atoms;
  std::string x = "1,2,3";
  std::string model = "crp";
  std::string construction = "stick-breaking";
  std::string suite = "all";
  unsigned n = 0;
  unsigned n_max = 10;
  unsigned k = 0;
  std::uint64_t count = 1;
  std::uint64_t seed = 1;
  std::optional<double> epsilon;
  std::size_t max_sticks = 100'000;
  std::string tolerance;
  std::string format;
  std::string output;
};

Error usage(const std::string& message) { return Error(ErrorKind::Usage, message); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (item.empty()) throw usage("empty item in list '" + text + "'");
    out.push_back(item);
  }
  if (out.empty()) throw usage("empty list");
  return out;
}

double as_double(const std::string& text) {
  return is_rational_literal(text) ? parse_rational(text).get_d() : parse_double(text);
}

template <Scalar S>
S parse_scalar(const std::string& text) {
  if constexpr (is_exact_v<S>) {
    return parse_rational(text);
  } else {
    return as_double(text);
  }
}

bool all_rational(std::initializer_list<const std::string*> texts) {
  for (const std::string* t : texts) {
    if (!t->empty() && !is_rational_literal(*t)) return false;
  }
  return true;
}

bool exact_mode(const RunConfig& cfg) { return all_rational({&cfg.alpha, &cfg.theta, &cfg.tau}); }

template <Scalar S>
ExtParams<S> make_params(const RunConfig& cfg) {
  const bool has_alpha = !cfg.alpha.empty();
  const bool has_theta = !cfg.theta.empty();
  const bool has_types = cfg.types > 0;
  if (has_types && !has_theta) {
    if (!has_alpha) return ExtParams<S>::coupon(cfg.types);
    return ExtParams<S>::neg_alpha(parse_scalar<S>(cfg.alpha), cfg.types);
  }
  if (has_alpha && has_theta && !has_types) {
    return ExtParams<S>::two_param(parse_scalar<S>(cfg.alpha), parse_scalar<S>(cfg.theta));
  }
  throw usage("give --alpha and --theta, or --M (coupon), or --alpha < 0 with --M");
}

Composition parse_composition(const std::string& text) {
  std::vector<unsigned> parts;
  for (const auto& item : split(text, ',')) {
    const Rational q = parse_rational(item);
    if (q.get_den() != 1 || q <= 0 || !q.get_num().fits_uint_p()) throw usage("parts must be positive integers");
    parts.push_back(static_cast<unsigned>(q.get_num().get_ui()));
  }
  return Composition(std::move(parts));
}

template <Scalar S>
std::vector<S> parse_list(const std::string& text) {
  std::vector<S> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_scalar<S>(item));
  return out;
}

std::string format_choice(const RunConfig& cfg, const std::string& fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "json" && f != "csv") throw usage("--format must be json or csv");
  return f;
}

// ---------------------------------------------------------------------------

int cmd_eppf(const RunConfig& cfg, std::ostream& out) {
  const Composition lambda = parse_composition(cfg.lambda);
  const std::string format = cfg.format.empty() ? "text" : cfg.format;
  auto emit = [&](const auto& value) {
    if (format == "json") {
      out << Json{{"lambda", lambda.parts()}, {"value", scalar_to_json(value)}}.dump() << '\n';
    } else if (format == "text") {
      out << format_scalar(value) << '\n';
    } else {
      throw usage("eppf supports --format text or json");
    }
  };
  if (exact_mode(cfg)) {
    emit(eppf(make_params<Rational>(cfg), lambda));
  } else {
    emit(eppf(make_params<double>(cfg), lambda));
  }
  return kExitOk;
}

// CSV: header "n[,label],1,...,n_max", one row per n with empty cells for
// m > n. JSON: [{"n": n, ["label": ...,] "values": [...]}, ...].
void write_matrix(std::ostream& out, const std::string& format, unsigned n_max, const std::string& label_name,
                  const std::function<std::string(unsigned)>& csv_label,
                  const std::function<Json(unsigned)>& json_label,
                  const std::function<std::string(unsigned, unsigned)>& csv_cell,
                  const std::function<Json(unsigned, unsigned)>& json_cell) {
  if (format == "csv") {
    out << "n";
    if (!label_name.empty()) out << ',' << label_name;
    for (unsigned m = 1; m <= n_max; ++m) out << ',' << m;
    out << '\n';
    for (unsigned n = 1; n <= n_max; ++n) {
      out << n;
      if (!label_name.empty()) out << ',' << csv_label(n);
      for (unsigned m = 1; m <= n_max; ++m) {
        out << ',';
        if (m <= n) out << csv_cell(n, m);
      }
      out << '\n';
    }
    return;
  }
  Json rows = Json::array();
  for (unsigned n = 1; n <= n_max; ++n) {
    Json row = Json::array();
    for (unsigned m = 1; m <= n; ++m) row.push_back(json_cell(n, m));
    Json item{{"n", n}};
    if (!label_name.empty()) item[label_name] = json_label(n);
    item["values"] = row;
    rows.push_back(item);
  }
  out << rows.dump() << '\n';
}

int cmd_decrement(const RunConfig& cfg, std::ostream& out) {
  const std::string format = format_choice(cfg, "csv");
  if (cfg.n_max < 1) throw usage("--n-max must be positive");
  auto run = [&]<Scalar S>(const ExtParams<S>& params) {
    const DecrementMatrix<S> q = decrement_matrix(params, cfg.n_max);
    write_matrix(
        out, format, cfg.n_max, "", nullptr, nullptr, [&](unsigned n, unsigned m) { return format_scalar(q(n, m)); },
        [&](unsigned n, unsigned m) { return scalar_to_json(q(n, m)); });
  };
  if (exact_mode(cfg)) {
    run(make_params<Rational>(cfg));
  } else {
    run(make_params<double>(cfg));
  }
  return kExitOk;
}

template <Scalar S>
LevyImageMeasure<S> make_measure(const RunConfig& cfg) {
  if (!cfg.atoms.empty()) {
    if (!cfg.alpha.empty() || !cfg.theta.empty()) throw usage("give either --atoms or --alpha/--theta");
    std::vector<typename LevyImageMeasure<S>::Atom> atoms;
    for (const auto& item : split(cfg.atoms, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw usage("atoms are written u:w");
      atoms.push_back({parse_scalar<S>(item.substr(0, colon)), parse_scalar<S>(item.substr(colon + 1))});
    }
    return LevyImageMeasure<S>::finite_atoms(std::move(atoms));
  }
  if (cfg.alpha.empty() || cfg.theta.empty()) throw usage("phi needs --alpha and --theta, or --atoms");
  return LevyImageMeasure<S>::alpha_theta(parse_scalar<S>(cfg.alpha), parse_scalar<S>(cfg.theta));
}

int cmd_phi(const RunConfig& cfg, std::ostream& out) {
  const std::string format = format_choice(cfg, "csv");
  if (cfg.n_max < 1) throw usage("--n-max must be positive");
  auto run = [&]<Scalar S>(const LevyImageMeasure<S>& measure) {
    // Closed-form values carry the factor B(1-alpha, 1+theta) and are printed
    // as decimals unless alpha = 0, where it is 1/(1+theta).
    const bool exact_unit = !measure.is_alpha_theta() || (is_exact_v<S> && measure.alpha() == 0);
    auto exact = [&](const PhiValue<S>& v) -> S {
      if constexpr (is_exact_v<S>) {
        if (measure.is_alpha_theta()) return S(v.coeff / (1 + measure.theta()));
      }
      return S(v.coeff);
    };
    auto show = [&](const PhiValue<S>& v) -> std::string {
      return exact_unit ? format_scalar(exact(v)) : format_scalar(v.value());
    };
    auto show_json = [&](const PhiValue<S>& v) -> Json { return exact_unit ? scalar_to_json(exact(v)) : Json(v.value()); };
    write_matrix(
        out, format, cfg.n_max, "phi", [&](unsigned n) { return show(laplace_exponent(measure, from_int<S>(n))); },
        [&](unsigned n) { return show_json(laplace_exponent(measure, from_int<S>(n))); },
        [&](unsigned n, unsigned m) { return show(phi_nm(measure, n, m)); },
        [&](unsigned n, unsigned m) { return show_json(phi_nm(measure, n, m)); });
  };
  if (all_rational({&cfg.alpha, &cfg.theta}) && (cfg.atoms.empty() || [&] {
        for (const auto& item : split(cfg.atoms, ',')) {
          for (const auto& part : split(item, ':')) {
            if (!is_rational_literal(part)) return false;
          }
        }
        return true;
      }())) {
    run(make_measure<Rational>(cfg));
  } else {
    run(make_measure<double>(cfg));
  }
  return kExitOk;
}

RecordTilt<double> parse_xi(const std::string& text) {
  if (text == "inf" || text == "infinity") return RecordTilt<double>::standard_order();
  const double v = as_double(text);
  if (v < 0.0) throw usage("--xi must be non-negative");
  return RecordTilt<double>::finite(v);
}

int cmd_regen_set(const RunConfig& cfg, std::ostream& out) {
  const std::string format = format_choice(cfg, "csv");
  const std::string& c = cfg.construction;
  const bool heavy = c == "ordered" || c == "crossbreed";
  const double epsilon = cfg.epsilon.value_or(heavy ? 1e-6 : 1e-9);
  RngHandle rng(cfg.seed);
  IntervalSet set;
  if (c == "stick-breaking") {
    set = stick_breaking_set(as_double(cfg.theta), epsilon, rng);
  } else if (c == "compound-poisson") {
    set = compound_poisson_set(as_double(cfg.theta), epsilon, rng);
  } else if (c == "crossbreed") {
    set = crossbreed_set(as_double(cfg.alpha), as_double(cfg.theta), epsilon, rng);
  } else if (c == "ordered") {
    const auto params = make_params<double>(cfg);
    const RecordTilt<double> xi = cfg.xi.empty() ? params.xi() : parse_xi(cfg.xi);
    const GemDraw gem = gem_sample(params, epsilon, rng, cfg.max_sticks, OnBudget::Truncate);
    set = ordered_arrangement(gem.frequencies, xi, rng);
  } else {
    throw usage("unknown construction '" + c + "'");
  }
  if (format == "csv") {
    out << "left,right\n";
    for (const auto& iv : set.intervals()) out << format_scalar(iv.left) << ',' << format_scalar(iv.right) << '\n';
  } else {
    Json intervals = Json::array();
    for (const auto& iv : set.intervals()) intervals.push_back({iv.left, iv.right});
    out << Json{{"intervals", intervals}, {"residual", set.residual()}}.dump() << '\n';
  }
  return kExitOk;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.format.empty() && cfg.format != "json") throw usage("sample writes newline-delimited JSON only");
  const auto params = make_params<double>(cfg);
  const double epsilon = cfg.epsilon.value_or(1e-9);
  const std::string& model = cfg.model;
  if (model != "crp" && model != "gem" && model != "paintbox") throw usage("unknown model '" + model + "'");
  if (model != "gem" && cfg.n < 1) throw usage("--n must be positive");
  std::vector<std::string> lines(cfg.count);
  parallel_for(cfg.count, Execution::Parallel, [&](std::uint64_t i) {
    RngHandle rng(split_seed(cfg.seed, i));
    if (model == "crp") {
      lines[i] = to_json(crp_sample(params, cfg.n, rng)).dump();
    } else if (model == "gem") {
      lines[i] = to_json(gem_sample(params, epsilon, rng, cfg.max_sticks, OnBudget::Truncate).frequencies).dump();
    } else {
      lines[i] = to_json(gem_paintbox_sample(params, cfg.n, rng)).dump();
    }
  });
  for (const auto& line : lines) out << line << '\n';
  return kExitOk;
}

int cmd_order(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.format.empty() && cfg.format != "json") throw usage("order writes newline-delimited JSON only");
  const bool tau_perm = !cfg.tau.empty() && cfg.xi.empty() && cfg.k == 0;
  std::vector<std::string> lines(cfg.count);
  if (tau_perm) {
    const std::vector<double> x = parse_list<double>(cfg.x);
    const double tau = as_double(cfg.tau);
    parallel_for(cfg.count, Execution::Parallel, [&](std::uint64_t i) {
      RngHandle rng(split_seed(cfg.seed, i));
      std::vector<std::size_t> order = tau_biased_perm(x, tau, rng);
      for (auto& v : order) ++v;
      lines[i] = Json{{"order", order}}.dump();
    });
  } else {
    if (cfg.k < 1) throw usage("--k must be positive");
    if (cfg.xi.empty() == cfg.tau.empty()) throw usage("give exactly one of --xi or --tau");
    const RecordTilt<double> xi =
        cfg.xi.empty() ? RecordTilt<double>::from_tau(as_double(cfg.tau)) : parse_xi(cfg.xi);
    parallel_for(cfg.count, Execution::Parallel, [&](std::uint64_t i) {
      RngHandle rng(split_seed(cfg.seed, i));
      const XiOrder order = xi_order(cfg.k, xi, rng);
      std::vector<std::size_t> arrangement = order.arrangement();
      for (auto& v : arrangement) ++v;
      lines[i] = Json{{"ranks", order.initial_ranks()}, {"arrangement", arrangement}, {"records", order.record_count()}}
                     .dump();
    });
  }
  for (const auto& line : lines) out << line << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

template <Scalar S>
struct CheckRecord {
  std::string check;
  S deviation;
};

template <Scalar S>
S max_over_compositions(unsigned n_max, unsigned min_parts, const std::function<S(const Composition&)>& f) {
  S worst = from_int<S>(0);
  for (unsigned n = 1; n <= n_max; ++n) {
    for (const Composition& lambda : compositions(n)) {
      if (lambda.k() < min_parts) continue;
      const S d = abs_value(f(lambda));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

template <Scalar S>
std::vector<CheckRecord<S>> run_suite(const RunConfig& cfg, const ExtParams<S>* family) {
  const std::string& suite = cfg.suite;
  const bool all = suite == "all";
  const unsigned n = cfg.n;
  std::vector<CheckRecord<S>> records;
  bool matched = false;
  auto want = [&](const char* name, bool applicable, bool needs_family = true) {
    if (suite == name) {
      matched = true;
      if (needs_family && !family) throw usage(std::string(name) + " needs --alpha/--theta or --M");
      if (!applicable) throw Error(ErrorKind::UnsupportedKernel, std::string(name) + " needs alpha, theta >= 0");
      return true;
    }
    return all && applicable && (family || !needs_family);
  };
  // Only called once want() has confirmed a family was given.
  const auto params = [&]() -> const ExtParams<S>& { return *family; };
  const bool kernel = family && params().has_deletion_kernel();

  if (want("normalization", true)) {
    records.push_back({"normalization", abs_value(S(eppf_total(params(), n) - 1))});
  }
  if (want("addition", true)) {
    records.push_back({"addition", max_over_compositions<S>(n, 1, [&](const Composition& l) {
                         return addition_residual(params(), l);
                       })});
  }
  if (want("factorization", true)) {
    records.push_back({"factorization", max_over_compositions<S>(n, 2, [&](const Composition& l) {
                         return factorization_check(params(), l);
                       })});
  }
  if (want("deletion", true)) records.push_back({"deletion", deletion_law_check(params(), n)});
  if (want("tau-regen", kernel)) {
    const TauRegenReport<S> report = tau_regen_check(params(), n);
    records.push_back({"tau-regen-remainder", report.remainder_deviation});
    records.push_back({"tau-regen-size", report.size_deviation});
  }
  if (want("decrement", kernel)) {
    const DecrementMatrix<S> direct = decrement_matrix(params(), n);
    const DecrementMatrix<S> from_phi =
        decrement_from_phi(LevyImageMeasure<S>::alpha_theta(params().alpha(), params().theta()), n);
    S worst = from_int<S>(0);
    S row_error = from_int<S>(0);
    for (unsigned r = 1; r <= n; ++r) {
      row_error = std::max(row_error, abs_value(S(direct.row_sum(r) - 1)));
      for (unsigned m = 1; m <= r; ++m) worst = std::max(worst, abs_value(S(direct(r, m) - from_phi(r, m))));
    }
    records.push_back({"decrement-phi", worst});
    records.push_back({"decrement-rows", row_error});
  }
  if (want("f1", kernel)) {
    S worst = from_int<S>(0);
    for (unsigned first = 1; first <= n; ++first) worst = std::max(worst, f1_consistency(params(), n, first));
    records.push_back({"f1", worst});
  }
  const bool tau_known = !cfg.tau.empty() || kernel;
  if (want("leem", tau_known, false) || want("records", true, false)) {
    const std::vector<S> x = parse_list<S>(cfg.x);
    if ((suite == "leem" || all) && tau_known) {
      const S tau = cfg.tau.empty() ? params().tau() : parse_scalar<S>(cfg.tau);
      records.push_back({"leem", leem_check<S>(x, tau)});
    }
    if (suite == "records" || all) records.push_back({"records", record_independence_check<S>(x)});
  }
  if (!all && !matched) throw usage("unknown suite '" + suite + "'");
  return records;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.format.empty() && cfg.format != "json") throw usage("verify writes JSON only");
  if (cfg.n < 1) throw usage("--n must be positive");
  const bool tau_only = !cfg.tau.empty() && cfg.alpha.empty() && cfg.theta.empty() && cfg.types == 0;
  bool all_pass = true;
  Json report = Json::array();
  auto run = [&]<Scalar S>(const std::optional<ExtParams<S>>& params) {
    const S tolerance = cfg.tolerance.empty() ? (is_exact_v<S> ? from_int<S>(0) : S(1e-12))
                                              : parse_scalar<S>(cfg.tolerance);
    const ExtParams<S>* family = params ? &*params : nullptr;
    const std::string described = params ? params->describe() : "(tau=" + cfg.tau + ")";
    for (const auto& record : run_suite(cfg, family)) {
      const bool pass = record.deviation <= tolerance;
      all_pass = all_pass && pass;
      report.push_back(Json{{"check", record.check},
                            {"params", described},
                            {"n", cfg.n},
                            {"deviation", scalar_to_json(record.deviation)},
                            {"tolerance", scalar_to_json(tolerance)},
                            {"regular", params ? params->is_regular() : true},
                            {"pass", pass}});
    }
  };
  if (all_rational({&cfg.alpha, &cfg.theta, &cfg.tau, &cfg.tolerance}) && [&] {
        for (const auto& item : split(cfg.x, ',')) {
          if (!is_rational_literal(item)) return false;
        }
        return true;
      }()) {
    run(tau_only ? std::optional<ExtParams<Rational>>() : make_params<Rational>(cfg));
  } else {
    run(tau_only ? std::optional<ExtParams<double>>() : make_params<double>(cfg));
  }
  out << report.dump(2) << '\n';
  return all_pass ? kExitOk : kExitVerificationFailed;
}

void add_param_options(CLI::App* cmd, RunConfig& cfg, bool with_tau = false) {
  cmd->add_option("--alpha", cfg.alpha, "alpha as p/q (exact) or decimal (float)");
  cmd->add_option("--theta", cfg.theta, "theta as p/q (exact) or decimal (float)");
  cmd->add_option("--M", cfg.types, "number of types: coupon limit alone, Dirichlet range with --alpha < 0");
  if (with_tau) cmd->add_option("--tau", cfg.tau, "bias of the tau-biased pick, in [0,1]");
}

void add_output_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--format", cfg.format, "json or csv");
  cmd->add_option("-o,--output", cfg.output, "write to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Sampling, exact evaluation and verification for the extended two-parameter partition family",
               "partition_lab"};
  app.require_subcommand(1, 1);

  auto* eppf_cmd = app.add_subcommand("eppf", "evaluate p(lambda)");
  add_param_options(eppf_cmd, cfg);
  eppf_cmd->add_option("--lambda", cfg.lambda, "composition, e.g. 2,1")->required();
  add_output_options(eppf_cmd, cfg);

  auto* sample_cmd = app.add_subcommand("sample", "draw partitions or frequencies (NDJSON)");
  add_param_options(sample_cmd, cfg);
  sample_cmd->add_option("--model", cfg.model, "crp, gem or paintbox")->check(CLI::IsMember({"crp", "gem", "paintbox"}));
  sample_cmd->add_option("--n", cfg.n, "size of the ground set");
  sample_cmd->add_option("--count", cfg.count, "number of draws");
  sample_cmd->add_option("--seed", cfg.seed, "64-bit seed");
  sample_cmd->add_option("--epsilon", cfg.epsilon, "GEM truncation: stop once the residual is below this (1e-9)");
  sample_cmd->add_option("--max-sticks", cfg.max_sticks, "GEM stick budget; the residual left is reported (100000)");
  add_output_options(sample_cmd, cfg);

  auto* decrement_cmd = app.add_subcommand("decrement", "decrement matrix q(n,m) (CSV rows n, columns m)");
  add_param_options(decrement_cmd, cfg);
  decrement_cmd->add_option("--n-max", cfg.n_max, "largest n");
  add_output_options(decrement_cmd, cfg);

  auto* phi_cmd = app.add_subcommand("phi", "Laplace exponent Phi(n) and Phi(n,m)");
  phi_cmd->add_option("--alpha", cfg.alpha, "alpha of the closed-form measure");
  phi_cmd->add_option("--theta", cfg.theta, "theta of the closed-form measure");
  phi_cmd->add_option("--atoms", cfg.atoms, "finite measure as u:w,u:w,...");
  phi_cmd->add_option("--n-max", cfg.n_max, "largest n");
  add_output_options(phi_cmd, cfg);

  auto* regen_cmd = app.add_subcommand("regen-set", "sample a regenerative interval set (CSV left,right)");
  add_param_options(regen_cmd, cfg);
  regen_cmd->add_option("--construction", cfg.construction, "stick-breaking, compound-poisson, crossbreed or ordered")
      ->check(CLI::IsMember({"stick-breaking", "compound-poisson", "crossbreed", "ordered"}));
  regen_cmd->add_option("--xi", cfg.xi, "order tilt for 'ordered' (default theta/alpha; 'inf' allowed)");
  regen_cmd->add_option("--epsilon", cfg.epsilon, "residual cap (1e-9; 1e-6 for ordered and crossbreed)");
  regen_cmd->add_option("--max-sticks", cfg.max_sticks, "GEM stick budget for 'ordered' (100000)");
  regen_cmd->add_option("--seed", cfg.seed, "64-bit seed");
  add_output_options(regen_cmd, cfg);

  auto* order_cmd = app.add_subcommand("order", "sample xi-orders (--k with --xi or --tau) or tau-biased permutations (--tau with --x)");
  order_cmd->add_option("--k", cfg.k, "size of the ordered set");
  order_cmd->add_option("--xi", cfg.xi, "record tilt (non-negative or 'inf')");
  order_cmd->add_option("--tau", cfg.tau, "tau in [0,1]; xi = (1-tau)/tau");
  order_cmd->add_option("--x", cfg.x, "positive sequence for a tau-biased permutation");
  order_cmd->add_option("--count", cfg.count, "number of draws");
  order_cmd->add_option("--seed", cfg.seed, "64-bit seed");
  add_output_options(order_cmd, cfg);

  auto* verify_cmd = app.add_subcommand("verify", "run exact characterization checks (JSON report)");
  add_param_options(verify_cmd, cfg, true);
  verify_cmd->add_option("--suite", cfg.suite,
                         "all, normalization, addition, factorization, deletion, tau-regen, decrement, f1, leem, records");
  verify_cmd->add_option("--n", cfg.n, "size of the ground set");
  verify_cmd->add_option("--x", cfg.x, "sequence for the leem and records checks");
  verify_cmd->add_option("--tolerance", cfg.tolerance, "largest accepted deviation (0 exact, 1e-12 float)");
  add_output_options(verify_cmd, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output, std::ios::binary);
      if (!file) throw usage("cannot open " + cfg.output);
    }
    std::ostream& sink = cfg.output.empty() ? out : file;
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "eppf") return cmd_eppf(cfg, sink);
    if (name == "sample") return cmd_sample(cfg, sink);
    if (name == "decrement") return cmd_decrement(cfg, sink);
    if (name == "phi") return cmd_phi(cfg, sink);
    if (name == "regen-set") return cmd_regen_set(cfg, sink);
    if (name == "order") return cmd_order(cfg, sink);
    if (name == "verify") return cmd_verify(cfg, sink);
    throw usage("unknown subcommand");
  } catch (const Error& e) {
    err << "partition_lab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "partition_lab: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace partlab::cli
