#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trees/class_system.hpp"
#include "trees/counting.hpp"
#include "trees/io.hpp"
#include "trees/statistics.hpp"
#include "trees/verify.hpp"

using namespace trees;

namespace {

std::string line(const char* key, const std::string& value) {
  return std::string(key) + " = " + value + "\n";
}

// Range [n, n_max]; either end may be omitted, at least one must be given.
std::pair<int, int> resolve_range(int n, int n_max) {
  if (n < 0 && n_max < 0) throw std::invalid_argument("provide --n and/or --n-max");
  const int lo = n < 0 ? 1 : n;
  const int hi = n_max < 0 ? lo : n_max;
  if (lo < 1 || hi < lo) throw std::invalid_argument("order range must satisfy 1 <= n <= n-max");
  return {lo, hi};
}

void emit(const Table& table, const std::string& output, const std::string& format,
          bool single_value) {
  const OutputFormat f = parse_format(format);
  if (!output.empty()) {
    write_table(output, table, f);
    return;
  }
  if (single_value)
    std::cout << table.rows[0].back() << "\n";
  else
    std::cout << render_table(table, f);
}

struct Options {
  int delta = 0;
  int n = -1;
  int n_max = -1;
  int order = 600;
  double tol = 1e-8;
  int terms = 30;
  int threads = 1;
  std::string kind = "free";
  std::string subtree;
  std::string suite = "all";
  std::string output;
  std::string format = "csv";
  bool plot = false;
  bool list = false;
};

int run_count(const Options& o) {
  const auto [lo, hi] = resolve_range(o.n, o.n_max);
  const CountingBundle b = counting_series(o.delta, hi);
  const UniSeries& s = o.kind == "planted" ? b.p : o.kind == "rooted" ? b.r : b.t;
  Table table{{"n", "quantity", "value"}, {}};
  for (int i = lo; i <= hi; ++i)
    table.rows.push_back({std::to_string(i), o.kind, fmt_rat(s.coeff(i))});
  emit(table, o.output, o.format, lo == hi);
  return 0;
}

int run_x0(const Options& o) {
  const SingularityEstimate est = find_x0(o.delta, o.order, o.tol);
  std::cout << line("x0", fmt_double(est.x0)) << line("p_at_x0", fmt_double(est.p_at_x0));
  if (!o.output.empty()) {
    Table table{{"key", "value"},
                {{"delta", std::to_string(o.delta)},
                 {"order", std::to_string(o.order)},
                 {"tol", fmt_double(o.tol)},
                 {"x0", fmt_double(est.x0)},
                 {"p_at_x0", fmt_double(est.p_at_x0)},
                 {"bracket_width", fmt_double(est.bracket_width)},
                 {"truncation", std::to_string(est.truncation)}}};
    write_table(o.output, table, parse_format(o.format));
  }
  return 0;
}

int run_mu(const Options& o) {
  const FreeTree H = parse_tree(o.subtree).tree;
  const ClassSystem sys = build_system(o.delta, H);
  const SingularityEstimate est = find_x0(o.delta, o.order, o.tol);
  const SingularityReport rep = compute_mu(sys, est.x0, o.order);
  if (!rep.warning.empty()) std::cerr << "warning: " << rep.warning << "\n";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", rep.mu);
  std::cout << line("mu", buf);
  if (!o.output.empty()) {
    Table table{{"key", "value"},
                {{"delta", std::to_string(o.delta)},
                 {"subtree", o.subtree},
                 {"h", std::to_string(sys.h)},
                 {"classes", std::to_string(sys.classes.size())},
                 {"deep_classes", std::to_string(sys.deep_ids.size())},
                 {"x0", fmt_double(rep.x0)},
                 {"mu", fmt_double(rep.mu)},
                 {"column_sum_residual", fmt_double(rep.column_sum_residual)},
                 {"extrapolation_residual", fmt_double(rep.extrapolation_residual)},
                 {"warning", rep.warning}}};
    write_table(o.output, table, parse_format(o.format));
  }
  return 0;
}

int run_dist(const Options& o) {
  const FreeTree H = parse_tree(o.subtree).tree;
  const TreeKind kind = o.kind == "planted"  ? TreeKind::planted
                        : o.kind == "rooted" ? TreeKind::rooted
                                             : TreeKind::free_trees;
  const auto [lo, hi] = resolve_range(o.n, o.n_max);
  Table table{{"n", "k", "count"}, {}};
  for (int i = lo; i <= hi; ++i) {
    const OccurrenceTable dist = occurrence_distribution(kind, i, o.delta, H);
    for (const auto& [k, count] : dist.counts)
      table.rows.push_back({std::to_string(i), std::to_string(k), fmt_int(count)});
  }
  emit(table, o.output, o.format, false);
  return 0;
}

int run_estrada(const Options& o) {
  const EstradaSurvey s = estrada_survey(o.n, o.delta, o.terms, o.threads);
  std::cout << line("trees", std::to_string(s.rows.size()))
            << line("mean_ee_per_n", fmt_double(s.mean_ee_per_n))
            << line("std_ee_per_n", fmt_double(s.std_ee_per_n))
            << line("fit_count", std::to_string(s.fit.count))
            << line("fit_slope", fmt_double(s.fit.slope))
            << line("fit_intercept", fmt_double(s.fit.intercept))
            << line("fit_r_squared", fmt_double(s.fit.r_squared));
  if (!o.output.empty()) {
    Table table{{"n", "delta", "tree", "zagreb", "ee"}, {}};
    for (const SurveyRow& row : s.rows)
      table.rows.push_back({std::to_string(s.n), std::to_string(s.delta), format_tree(row.tree),
                            fmt_int(row.spectral.zagreb), fmt_double(row.spectral.ee)});
    write_table(o.output, table, parse_format(o.format));
  }
  if (o.plot) {
    std::vector<std::pair<double, double>> points;
    for (const SurveyRow& row : s.rows)
      points.emplace_back(to_double(row.spectral.zagreb), row.spectral.ee);
    const std::string path = o.output.empty() ? "estrada_scatter.svg" : o.output + ".svg";
    char title[64];
    std::snprintf(title, sizeof title, "Estrada index vs Zagreb index, n=%d, delta=%d", o.n,
                  o.delta);
    write_svg_scatter(path, points, "first Zagreb index D", "Estrada index EE", title);
  }
  return 0;
}

int run_verify_cmd(const Options& o) {
  if (o.list) {
    for (const std::string& name : verify_suite_names()) std::cout << name << "\n";
    return 0;
  }
  std::vector<std::string> names;
  if (o.suite != "all") names.push_back(o.suite);
  const int failures = run_verify(names, o.threads, std::cout);
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and asymptotic statistics of subtree occurrences in degree-bounded trees"};
  app.require_subcommand(1);
  Options o;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", o.output, "write the report to this file");
    cmd->add_option("--format", o.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };

  CLI::App* count = app.add_subcommand("count", "exact tree counts by order");
  count->add_option("--delta", o.delta, "maximum degree")->required();
  count->add_option("--kind", o.kind, "free|rooted|planted")
      ->check(CLI::IsMember({"free", "rooted", "planted"}))
      ->capture_default_str();
  count->add_option("--n", o.n, "order (range start when --n-max is given)");
  count->add_option("--n-max", o.n_max, "range end");
  add_output(count);

  CLI::App* x0 = app.add_subcommand("x0", "dominant singularity of the planted series");
  x0->add_option("--delta", o.delta, "maximum degree")->required();
  x0->add_option("--order", o.order, "truncation order")->capture_default_str();
  x0->add_option("--tol", o.tol, "bisection tolerance")->capture_default_str();
  add_output(x0);

  CLI::App* mu = app.add_subcommand("mu", "mean-growth constant of a subtree count");
  mu->add_option("--delta", o.delta, "maximum degree")->required();
  mu->add_option("--subtree", o.subtree, "parent array, \"\" for the single vertex")->required();
  mu->add_option("--order", o.order, "truncation order")->capture_default_str();
  mu->add_option("--tol", o.tol, "singularity tolerance")->capture_default_str();
  add_output(mu);

  CLI::App* dist = app.add_subcommand("dist", "exhaustive occurrence histograms");
  dist->add_option("--delta", o.delta, "maximum degree")->required();
  dist->add_option("--subtree", o.subtree, "parent array, \"\" for the single vertex")->required();
  dist->add_option("--kind", o.kind, "free|rooted|planted")
      ->check(CLI::IsMember({"free", "rooted", "planted"}))
      ->capture_default_str();
  dist->add_option("--n", o.n, "order (range start when --n-max is given)");
  dist->add_option("--n-max", o.n_max, "range end");
  add_output(dist);

  CLI::App* estrada = app.add_subcommand("estrada", "spectral survey of all trees of one order");
  estrada->add_option("--delta", o.delta, "maximum degree")->required();
  estrada->add_option("--n", o.n, "order")->required();
  estrada->add_option("--terms", o.terms, "walk-moment depth K")->capture_default_str();
  estrada->add_option("--threads", o.threads, "parallelism bound")->capture_default_str();
  estrada->add_flag("--plot", o.plot, "also write an SVG scatter of EE against D");
  add_output(estrada);

  CLI::App* verify = app.add_subcommand("verify", "acceptance suites");
  verify->add_option("--suite", o.suite, "suite name, or all")->capture_default_str();
  verify->add_option("--threads", o.threads, "parallelism bound")->capture_default_str();
  verify->add_flag("--list", o.list, "list suite names and exit");

  try {
    app.parse(argc, argv);
    if (count->parsed()) return run_count(o);
    if (x0->parsed()) return run_x0(o);
    if (mu->parsed()) return run_mu(o);
    if (dist->parsed()) return run_dist(o);
    if (estrada->parsed()) return run_estrada(o);
    return run_verify_cmd(o);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
