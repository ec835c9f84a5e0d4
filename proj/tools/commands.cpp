#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "spidernet/analysis.hpp"
#include "spidernet/error.hpp"
#include "spidernet/free_meixner.hpp"
#include "spidernet/grover_walk.hpp"

namespace spidernet::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw DimensionMismatch("row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidParams("no column named " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::json operator()(std::int64_t v) const { return v; }
    // Round through the printed form so JSON carries the same 15 digits as CSV.
    nlohmann::json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return std::strtod(format_number(v).c_str(), nullptr);
    }
    nlohmann::json operator()(const std::string& v) const { return v; }
    nlohmann::json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_escape(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i]));
    out << '\n';
  }
}

void write_json(const Table& t, std::ostream& out) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[t.columns[i]] = cell_json(row[i]);
    records.push_back(std::move(rec));
  }
  out << records.dump(2) << '\n';
}

void write_table(const Table& t, Format f, std::ostream& out) {
  if (f == Format::kJson) {
    write_json(t, out);
  } else {
    write_csv(t, out);
  }
}

namespace {

std::vector<std::string> walk_columns(std::size_t levels) {
  std::vector<std::string> cols{"n", "p_origin"};
  for (std::size_t l = 1; l <= levels; ++l) cols.push_back("p_stratum_" + std::to_string(l));
  return cols;
}

void require_steps(int steps) {
  if (steps < 0) throw InvalidParams("step count must be non-negative");
}

}  // namespace

Table simulate_full(const SpidernetParams& sp, int steps, std::size_t levels) {
  require_steps(steps);
  const Spidernet g = build_spidernet(sp, steps + 2);
  Table t{walk_columns(levels), {}};
  WalkState s = isotropic_initial_state(g);
  for (int n = 0; n <= steps; ++n) {
    if (n > 0) s = step(g, s);
    const std::vector<double> strata = stratum_distribution(g, vertex_distribution(g, s));
    std::vector<Cell> row{std::int64_t{n}, strata[0]};
    for (std::size_t l = 1; l <= levels; ++l) row.emplace_back(l < strata.size() ? strata[l] : 0.0);
    t.add(std::move(row));
  }
  return t;
}

Table simulate_reduced(const PqParams& pq, int steps, std::size_t levels) {
  require_steps(steps);
  pq.validate();
  Table t{walk_columns(levels), {}};
  ReducedState s = ReducedState::origin();
  for (int n = 0; n <= steps; ++n) {
    if (n > 0) reduced_step_inplace(pq, s);
    std::vector<Cell> row{std::int64_t{n}, origin_probability(s)};
    for (std::size_t l = 1; l <= levels; ++l) row.emplace_back(stratum_probability(s, l));
    t.add(std::move(row));
  }
  return t;
}

Table spectrum(const PqParams& pq, std::size_t N) {
  const CutoffWalk walk(pq, N);
  const UEigensystem ue = u_eigensystem(pq, N);
  const double formula = (2.0 * pq.r - 1.0) * static_cast<double>(N - 1);
  double spectral = 1.0 - static_cast<double>(ue.minus_one_multiplicity);
  for (double th : ue.theta) spectral += 2.0 * std::cos(th);
  const double basis = walk.trace();

  Table t{{"j", "lambda", "theta", "multiplicity", "trace_basis", "trace_spectral",
           "trace_formula", "max_residual"},
          {}};
  auto add = [&](std::int64_t j, double lambda, double theta, std::int64_t mult) {
    t.add({j, lambda, theta, mult, basis, spectral, formula, ue.max_residual});
  };
  add(0, 1.0, 0.0, 1);
  for (std::size_t j = 0; j < ue.theta.size(); ++j) {
    add(static_cast<std::int64_t>(j + 1), std::cos(ue.theta[j]), ue.theta[j], 2);
  }
  if (ue.minus_one_multiplicity > 0) {
    add(static_cast<std::int64_t>(ue.theta.size() + 1), -1.0, std::numbers::pi,
        static_cast<std::int64_t>(ue.minus_one_multiplicity));
  }
  return t;
}

Table amplitude_table(const PqParams& pq, int l, int m, int n_max) {
  if (l < 0 || m < 0) throw InvalidParams("l and m must be non-negative");
  require_steps(n_max);
  const FreeMeixnerLaw law = law_from_pq(pq);
  Table t{{"n", "integral", "reduced", "abs_diff", "asymptotic"}, {}};
  ReducedState s = psi_vector(pq, static_cast<std::size_t>(m));
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) reduced_step_inplace(pq, s);
    const double integral = amplitude(law, l, m, n);
    const double reduced = psi_overlap(pq, s, static_cast<std::size_t>(l)).real();
    const double asym = m == 0 ? asymptotic_amplitude(pq, l, n) : std::nan("");
    t.add({std::int64_t{n}, integral, reduced, std::abs(integral - reduced), asym});
  }
  return t;
}

namespace {

const std::vector<std::string> kLocalizeColumns{
    "a", "b", "c", "w", "w_numerator", "w_denominator", "xi", "theta_tilde", "localized",
    "qbar_origin", "b_exceeds_c_plus_sqrt_c"};

void add_report(Table& t, const LocalizationReport& r) {
  const SpidernetParams& sp = r.params;
  t.add({std::int64_t{sp.a}, std::int64_t{sp.b}, std::int64_t{sp.c}, r.w, r.w_numerator,
         r.w_denominator, r.xi, r.theta_tilde, r.localized, r.qbar_origin,
         sp.b > sp.c + std::sqrt(static_cast<double>(sp.c))});
}

}  // namespace

Table localize(const SpidernetParams& sp) {
  Table t{kLocalizeColumns, {}};
  add_report(t, classify(sp));
  return t;
}

Table localize_sweep(int b_max, int c_max, int a) {
  if (b_max < 2 || c_max < 1) throw InvalidParams("sweep needs b_max >= 2 and c_max >= 1");
  Table t{kLocalizeColumns, {}};
  for (int b = 2; b <= b_max; ++b) {
    for (int c = 1; c <= std::min(c_max, b - 1); ++c) add_report(t, classify({a, b, c}));
  }
  return t;
}

Table figure2(const SpidernetParams& sp) {
  const LocalizationReport rep = classify(sp);
  const PqParams pq = params_from_spidernet(sp);
  constexpr int kFirst = 620;
  constexpr int kLast = 650;
  Table t{{"n", "simulated", "envelope", "qbar"}, {}};
  ReducedState s = reduced_evolve(pq, ReducedState::origin(), kFirst);
  for (int n = kFirst; n <= kLast; ++n) {
    if (n > kFirst) reduced_step_inplace(pq, s);
    const double c = std::cos(n * rep.theta_tilde);
    t.add({std::int64_t{n}, origin_probability(s), rep.w * rep.w * c * c, rep.qbar_origin});
  }
  return t;
}

Table rwalk(const PqParams& pq, int n_max) {
  require_steps(n_max);
  const FreeMeixnerLaw law = law_from_pq(pq);
  const std::vector<double> chain = markov_return(pq, n_max);
  Table t{{"n", "integral", "markov", "abs_diff"}, {}};
  for (int n = 0; n <= n_max; ++n) {
    const double integral = random_walk_return(law, n);
    const double markov = chain[static_cast<std::size_t>(n)];
    t.add({std::int64_t{n}, integral, markov, std::abs(integral - markov)});
  }
  return t;
}

namespace {

// <e_0, J^m e_0> for the law's Jacobi matrix truncated at size m+2.
double jacobi_moment(const FreeMeixnerLaw& law, int m) {
  const auto size = static_cast<std::size_t>(m) + 2;
  std::vector<double> v(size, 0.0);
  std::vector<double> next(size, 0.0);
  v[0] = 1.0;
  for (int k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < size; ++i) {
      double x = law.jacobi_alpha(i + 1) * v[i];
      if (i > 0) x += std::sqrt(law.jacobi_omega(i)) * v[i - 1];
      if (i + 1 < size) x += std::sqrt(law.jacobi_omega(i + 1)) * v[i + 1];
      next[i] = x;
    }
    v.swap(next);
  }
  return v[0];
}

}  // namespace

Table verify() {
  Table t{{"check", "passed", "value", "tolerance"}, {}};
  auto record = [&](const std::string& name, double value, double tol) {
    t.add({name, value <= tol, value, tol});
  };
  const SpidernetParams net{4, 6, 3};
  const PqParams pq = params_from_spidernet(net);
  const FreeMeixnerLaw law = law_from_pq(pq);

  const LocalizationReport rep = classify(net);
  record("closed_form_constants",
         std::max({std::abs(rep.w - 0.5), std::abs(rep.xi + 1.0 / 3.0), std::abs(rep.qbar_origin - 0.125)}),
         1e-14);

  double boundary_mismatches = 0.0;
  for (int b = 2; b <= 50; ++b) {
    for (int c = 1; c <= b - 1; ++c) {
      if (classify({1, b, c}).localized != (b > c + std::sqrt(static_cast<double>(c)))) {
        boundary_mismatches += 1.0;
      }
    }
  }
  record("classifier_boundary_mismatches", boundary_mismatches, 0.0);

  {
    const int n_full = 6;
    const Spidernet g = build_spidernet(net, n_full + 2);
    const WalkState s0 = isotropic_initial_state(g);
    WalkState s = s0;
    ReducedState r = ReducedState::origin();
    double worst = 0.0;
    for (int n = 0; n <= n_full; ++n) {
      if (n > 0) {
        s = step(g, s);
        reduced_step_inplace(pq, r);
      }
      worst = std::max(worst, std::abs(inner_product(s0, s) - r.sites[0].plus));
    }
    record("full_vs_reduced", worst, 1e-10);
  }
  {
    ReducedState r = ReducedState::origin();
    double worst = 0.0;
    for (int n = 0; n <= 100; ++n) {
      if (n > 0) reduced_step_inplace(pq, r);
      worst = std::max(worst, std::abs(amplitude(law, 0, 0, n) - r.sites[0].plus.real()));
    }
    record("reduced_vs_integral", worst, 1e-8);
  }
  record("cesaro_origin_N2000", std::abs(cesaro_origin(pq, 2000) - rep.qbar_origin), 5e-3);

  {
    double worst = 0.0;
    for (const PqParams& p : {pq, params_from_spidernet({3, 3, 2})}) {
      for (std::size_t N : {3u, 5u, 8u}) {
        const UEigensystem ue = u_eigensystem(p, N);
        const double formula = (2.0 * p.r - 1.0) * static_cast<double>(N - 1);
        worst = std::max({worst, std::abs(CutoffWalk(p, N).trace() - formula), ue.max_residual});
        const std::size_t want = p.r > 0 ? N - 2 : N;
        if (ue.minus_one_multiplicity != want) worst = std::max(worst, 1.0);
      }
    }
    record("cutoff_spectrum", worst, 1e-10);
  }
  {
    double worst = 0.0;
    for (int k = 0; k <= 40; ++k) {
      const double x = -1.0 + 2.0 * k / 40.0;
      for (int n = 0; n <= 12; ++n) {
        const double rec = orth_poly_recurrence(law, n, x);
        const double scale = std::max(1.0, std::abs(rec));
        worst = std::max(worst, std::abs(rec - orth_poly_closed_cheb(law, n, x)) / scale);
        const double dx = x - law.alpha;
        if (dx * dx > 4.0 * law.omega) {
          worst = std::max(worst, std::abs(rec - orth_poly_closed_R(law, n, x)) / scale);
        }
      }
    }
    record("polynomial_forms", worst, 1e-9);
  }
  {
    double worst = 0.0;
    for (int n = 0; n <= 20; ++n) {
      worst = std::max(worst, std::abs(special_value(pq, n) - normalized_p(law, n, law.atom->location)));
    }
    record("special_value", worst, 1e-10);
  }
  record("total_mass",
         std::abs(integrate_density(law, [](double) { return 1.0; }) + law.atom_mass() - 1.0), 1e-10);
  {
    double worst = 0.0;
    for (int m = 0; m <= 12; ++m) {
      worst = std::max(worst, std::abs(integrate(law, [m](double x) { return std::pow(x, m); }) -
                                       jacobi_moment(law, m)));
    }
    record("moments", worst, 1e-9);
  }
  {
    const std::vector<double> strata = cesaro_strata(pq, 2000, 4);
    double worst_margin = 0.0;
    for (int l = 1; l <= 4; ++l) {
      const double bound = exp_localization_bound(net, l).stratum;
      worst_margin = std::max(worst_margin, bound - strata[static_cast<std::size_t>(l)]);
    }
    record("stratum_bounds_shortfall", worst_margin, 0.0);
  }
  return t;
}

Table edge_table(const Spidernet& g) {
  Table t{{"u", "v"}, {}};
  const auto& he = g.half_edges();
  auto label = [&](std::size_t v) {
    const VertexId id = g.vertex_id(v);
    return std::to_string(id.stratum) + ":" + std::to_string(id.index);
  };
  for (std::size_t h = 0; h < he.size(); ++h) {
    const auto [u, v] = he.endpoints(h);
    if (u < v) t.add({label(u), label(v)});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct ParamArgs {
  std::vector<int> abc;
  std::vector<double> pq;
};

void add_param_args(CLI::App* sub, ParamArgs& args, bool allow_pq) {
  sub->add_option("params", args.abc, "spidernet parameters a b c")->expected(3);
  if (allow_pq) {
    sub->add_option("--pq", args.pq, "raw walk parameters p q [r] instead of a b c")->expected(2, 3);
  }
}

SpidernetParams resolve_net(const ParamArgs& args, std::optional<SpidernetParams> fallback = {}) {
  if (!args.pq.empty()) throw InvalidParams("this command needs spidernet parameters a b c");
  if (args.abc.empty()) {
    if (fallback) return *fallback;
    throw InvalidParams("spidernet parameters a b c are required");
  }
  SpidernetParams sp{args.abc[0], args.abc[1], args.abc[2]};
  sp.validate();
  return sp;
}

PqParams resolve_pq(const ParamArgs& args) {
  if (!args.pq.empty() && !args.abc.empty()) {
    throw InvalidParams("give either a b c or --pq, not both");
  }
  if (!args.pq.empty()) {
    return args.pq.size() == 3 ? PqParams::from_pqr(args.pq[0], args.pq[1], args.pq[2])
                               : PqParams::from_pq(args.pq[0], args.pq[1]);
  }
  return params_from_spidernet(resolve_net(args));
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

std::filesystem::path output_path(const std::string& requested) {
  std::filesystem::path p(requested);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("SPIDERNET_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

class OutputError : public Error {
 public:
  explicit OutputError(const std::string& message) : Error("OutputError", message) {}
};

void deliver(const std::string& text, const std::string& requested, std::ostream& out) {
  if (requested.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path p = output_path(requested);
  std::ofstream file(p);
  if (!file) throw OutputError("cannot open " + p.string() + " for writing");
  file << text;
  if (!file) throw OutputError("failed writing " + p.string());
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grover walks on spidernets: simulation, spectra, amplitudes and localization"};
  app.name("spidernet");
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  std::string output;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("-o,--output", output,
                 "output file; relative paths are resolved against $SPIDERNET_OUTPUT_DIR");

  ParamArgs sim_args;
  int sim_steps = 10;
  bool sim_full = false;
  bool sim_reduced = false;
  std::size_t sim_levels = 4;
  CLI::App* sim = app.add_subcommand("simulate", "evolve the walk from the root");
  add_param_args(sim, sim_args, true);
  sim->add_option("--steps", sim_steps, "number of steps")->capture_default_str();
  auto* full_flag = sim->add_flag("--full", sim_full, "evolve on the full truncated graph");
  sim->add_flag("--reduced", sim_reduced, "evolve the ladder reduction (default)")->excludes(full_flag);
  sim->add_option("--levels", sim_levels, "strata reported besides the root")->capture_default_str();

  ParamArgs spec_args;
  std::size_t spec_cutoff = 0;
  CLI::App* spec = app.add_subcommand("spectrum", "eigenvalues of the cutoff walk on H(N)");
  add_param_args(spec, spec_args, true);
  spec->add_option("--cutoff,-N", spec_cutoff, "path length N >= 2")->required();

  ParamArgs amp_args;
  int amp_l = 0;
  int amp_m = 0;
  int amp_n = 50;
  CLI::App* amp = app.add_subcommand("amplitude", "<Psi_l, U^n Psi_m> by quadrature and by evolution");
  add_param_args(amp, amp_args, true);
  amp->add_option("-l", amp_l, "left index")->capture_default_str();
  amp->add_option("-m", amp_m, "right index")->capture_default_str();
  amp->add_option("--n-max", amp_n, "largest n")->capture_default_str();

  ParamArgs loc_args;
  std::vector<int> loc_sweep;
  int loc_root = 1;
  CLI::App* loc = app.add_subcommand("localize", "initial point localization report");
  add_param_args(loc, loc_args, false);
  loc->add_option("--sweep", loc_sweep, "classify the grid up to b_max c_max")->expected(2);
  loc->add_option("--root-degree", loc_root, "root degree a used in sweep rows")->capture_default_str();

  ParamArgs fig_args;
  CLI::App* fig = app.add_subcommand("figure2", "return probability over n = 620..650 with its envelope");
  add_param_args(fig, fig_args, false);

  ParamArgs rw_args;
  int rw_n = 20;
  CLI::App* rw = app.add_subcommand("rwalk", "classical isotropic random walk return probabilities");
  add_param_args(rw, rw_args, true);
  rw->add_option("--n-max", rw_n, "largest n")->capture_default_str();

  CLI::App* ver = app.add_subcommand("verify", "run the invariant suite");

  ParamArgs graph_args;
  int graph_radius = 2;
  CLI::App* gr = app.add_subcommand("graph", "export the canonical spidernet as an edge list");
  add_param_args(gr, graph_args, false);
  gr->add_option("--radius,-R", graph_radius, "truncation radius")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    emit_error(err, "UsageError", e.what());
    return e.get_exit_code();
  }

  try {
    const Format fmt = format == "json" ? Format::kJson : Format::kCsv;
    Table table;
    int status = 0;
    std::ostringstream text;
    if (*sim) {
      if (sim_full) {
        table = simulate_full(resolve_net(sim_args), sim_steps, sim_levels);
      } else {
        table = simulate_reduced(resolve_pq(sim_args), sim_steps, sim_levels);
      }
    } else if (*spec) {
      table = spectrum(resolve_pq(spec_args), spec_cutoff);
    } else if (*amp) {
      table = amplitude_table(resolve_pq(amp_args), amp_l, amp_m, amp_n);
    } else if (*loc) {
      if (!loc_sweep.empty()) {
        if (!loc_args.abc.empty()) throw InvalidParams("give either a b c or --sweep, not both");
        table = localize_sweep(loc_sweep[0], loc_sweep[1], loc_root);
      } else {
        table = localize(resolve_net(loc_args));
      }
    } else if (*fig) {
      table = figure2(resolve_net(fig_args, SpidernetParams{4, 6, 3}));
    } else if (*rw) {
      table = rwalk(resolve_pq(rw_args), rw_n);
    } else if (*ver) {
      table = verify();
      const std::size_t col = table.column("passed");
      for (const auto& row : table.rows) {
        if (!std::get<bool>(row[col])) status = 1;
      }
    } else if (*gr) {
      const Spidernet g = build_spidernet(resolve_net(graph_args), graph_radius);
      if (fmt == Format::kCsv) {
        write_edge_list(g, text);
        deliver(text.str(), output, out);
        return 0;
      }
      table = edge_table(g);
    }
    write_table(table, fmt, text);
    deliver(text.str(), output, out);
    if (status != 0) emit_error(err, "VerificationFailed", "at least one invariant check failed");
    return status;
  } catch (const Error& e) {
    emit_error(err, e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error(err, "InternalError", e.what());
    return 1;
  }
}

}  // namespace spidernet::cli
