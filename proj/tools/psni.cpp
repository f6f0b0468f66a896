// Command-line front end: 2-adic queries, best-known bounds, table
// generation, claim verification, proof replays, and chart-db checks.
//
// Exit codes: 0 success, 1 exact-claim failure, 2 usage/input error.

#include "psni/chart.hpp"
#include "psni/dyadic.hpp"
#include "psni/obstruction.hpp"
#include "psni/rules.hpp"
#include "psni/tabulator.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string valuation_str(const psni::dyadic::Valuation& v) {
  return v.is_infinite ? "inf" : std::to_string(v.value);
}

psni::chart::ChartDb load_chartdb(const std::string& path) {
  if (path.empty()) return psni::chart::ChartDb::embedded_default();
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open chart db: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return psni::chart::ChartDb::parse(ss.str());
}

std::string dim_str(const psni::obstruction::DimExpr& e) { return e.str(); }

}  // namespace

int main(int argc, char** argv) {
  using namespace psni;

  CLI::App app{"nonimmersion bounds for real projective spaces"};
  app.require_subcommand(1);

  std::string config_path, chartdb_path;
  app.add_option("--config", config_path, "rule config file (key=value)");
  app.add_option("--chartdb", chartdb_path, "chart database file")->envname("PSNI_CHARTDB");

  long long arg_n = 0, arg_top = 0, arg_bottom = 0, arg_m = 0;
  std::string arg_format = "csv", arg_out, arg_claims = "all", arg_part;

  auto* cmd_alpha = app.add_subcommand("alpha", "binary digit sum");
  cmd_alpha->add_option("N", arg_n)->required();
  auto* cmd_nu = app.add_subcommand("nu", "2-adic valuation");
  cmd_nu->add_option("N", arg_n)->required();
  auto* cmd_binomnu = app.add_subcommand("binomnu", "2-adic valuation of C(TOP, BOTTOM)");
  cmd_binomnu->add_option("TOP", arg_top)->required();
  cmd_binomnu->add_option("BOTTOM", arg_bottom)->required();
  auto* cmd_best = app.add_subcommand("best", "best known nonimmersion for P^N");
  cmd_best->add_option("N", arg_n)->required();
  auto* cmd_table = app.add_subcommand("table", "emit the best-known table");
  cmd_table->add_option("--format", arg_format)->check(CLI::IsMember({"csv", "html", "md"}));
  cmd_table->add_option("--out", arg_out, "output path (default stdout)");
  auto* cmd_verify = app.add_subcommand("verify", "check the countable claims");
  cmd_verify->add_option("--claims", arg_claims)
      ->check(CLI::IsMember({"all", "kd2", "within3", "spots", "counts"}));
  auto* cmd_replay = app.add_subcommand("replay", "replay an obstruction proof");
  cmd_replay->add_option("--part", arg_part)->required()->check(CLI::IsMember({"a", "b", "c", "d", "e"}));
  cmd_replay->add_option("--M", arg_m)->required();
  auto* cmd_charts = app.add_subcommand("charts", "chart database operations");
  bool charts_check = false;
  cmd_charts->add_flag("--check", charts_check, "validate every chart");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_alpha->parsed()) {
      std::cout << dyadic::alpha(arg_n) << "\n";
    } else if (cmd_nu->parsed()) {
      std::cout << dyadic::nu(arg_n) << "\n";
    } else if (cmd_binomnu->parsed()) {
      std::cout << valuation_str(dyadic::binom_nu(arg_top, arg_bottom)) << "\n";
    } else if (cmd_best->parsed()) {
      auto catalog = rules::default_catalog();
      auto config = config_path.empty() ? rules::RuleConfig::defaults(catalog)
                                        : rules::load_config(config_path, catalog);
      rules::FactIndex index(catalog, config, std::max(arg_n, tabulator::kTableMin));
      auto [k, src] = index.best_row(arg_n);
      std::cout << arg_n << " -> " << k << " (" << src << ")\n";
    } else if (cmd_table->parsed()) {
      auto catalog = rules::default_catalog();
      auto config = config_path.empty() ? rules::RuleConfig::defaults(catalog)
                                        : rules::load_config(config_path, catalog);
      auto rows = tabulator::build_table(catalog, config);
      auto format = tabulator::parse_format(arg_format);
      if (arg_out.empty())
        tabulator::emit(rows, format, std::cout);
      else
        tabulator::emit(rows, format, arg_out);
    } else if (cmd_verify->parsed()) {
      auto catalog = rules::default_catalog();
      auto config = config_path.empty() ? rules::RuleConfig::defaults(catalog)
                                        : rules::load_config(config_path, catalog);
      bool failed = false;
      for (const auto& r : tabulator::verify_claims(catalog, config)) {
        if (arg_claims != "all" && r.group != arg_claims &&
            !(arg_claims == "spots" && r.group == "family"))
          continue;
        std::cout << tabulator::claim_line(r) << "\n";
        if (r.status == tabulator::ClaimStatus::fail) failed = true;
      }
      return failed ? 1 : 0;
    } else if (cmd_replay->parsed()) {
      auto db = load_chartdb(chartdb_path);
      auto part = obstruction::parse_part(arg_part);
      auto report = obstruction::replay_part(part, arg_m, db);
      std::cout << "part " << obstruction::part_letter(part) << " M=" << arg_m << "\n";
      for (const auto& st : report.statements) {
        std::cout << "statement n=" << st.n << " k=" << st.k << "\n";
        std::cout << "  axial n1=" << dim_str(st.axial.n1) << " n2=" << dim_str(st.axial.n2)
                  << " target=" << dim_str(st.axial.target) << "\n";
        std::cout << "  obstruction degree=" << dim_str(st.exponent_degree) << " top=" << st.top << "\n";
        std::cout << "  chart bottoms=(" << st.bottoms.first << "," << st.bottoms.second
                  << ") deg=" << st.degree << "\n";
        for (const auto& t : st.terms)
          std::cout << "  term offset=" << t.offset << " nu=" << valuation_str(t.valuation) << "\n";
        for (const auto& t : st.certified_zero)
          std::cout << "  term offset=" << t.offset << " nu=" << valuation_str(t.valuation)
                    << " (outside window, certified zero)\n";
        std::cout << "  verdict " << chart::to_string(st.verdict) << "\n";
      }
      std::cout << "verdict " << chart::to_string(report.verdict) << "\n";
      return report.verdict == chart::Verdict::nonzero ? 0 : 1;
    } else if (cmd_charts->parsed()) {
      auto db = load_chartdb(chartdb_path);
      if (charts_check) {
        for (const auto& c : db.charts()) {
          c.validate();
          std::cout << "chart (" << c.bottoms.first << "," << c.bottoms.second << ") deg=" << c.degree
                    << " towers=" << c.towers.size() << " merges=" << c.merges.size() << " ok\n";
        }
      } else {
        for (const auto& c : db.charts())
          std::cout << "chart (" << c.bottoms.first << "," << c.bottoms.second << ") deg=" << c.degree
                    << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
