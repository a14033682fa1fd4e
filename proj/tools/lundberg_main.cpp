// Command-line front end: alpha / excess / bounds / simulate / embed / report.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lundberg/lundberg.hpp"

namespace {

lundberg::OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return lundberg::OutputFormat::csv;
  if (s == "json") return lundberg::OutputFormat::json;
  return lundberg::OutputFormat::text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjustment coefficient, drawdown bounds and Skorokhod-embedding "
               "checks for positive-mean random walks"};
  app.require_subcommand(1);

  lundberg::RunConfig cfg;
  std::string format;  // empty = per-subcommand default
  std::string mode = "max";
  std::string scheme = "day";
  double cap = 0.0;
  bool has_cap = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dist", cfg.dist_path, "distribution spec file (JSON)")
        ->required();
    sub->add_option("--format", format, "output format: csv, json or text");
    sub->add_option("--seed", cfg.seed, "rng seed (default 0x5EED)");
  };

  CLI::App* alpha = app.add_subcommand("alpha", "adjustment coefficient and indices");
  add_common(alpha);

  CLI::App* excess = app.add_subcommand("excess", "excess constants d+, d-, d0");
  add_common(excess);
  excess->add_option("--cap", cap, "restrict the maximization to (0, cap)")
      ->each([&](const std::string&) { has_cap = true; });

  CLI::App* bounds = app.add_subcommand("bounds", "drawdown and minimum bounds");
  add_common(bounds);
  bounds->add_option("--d", cfg.d, "drawdown size");
  bounds->add_option("--x", cfg.xs, "minimum tail level (repeatable)");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo verification");
  add_common(simulate);
  simulate->add_option("mode", mode, "max, min or martingale")->required();
  simulate->add_option("--d", cfg.d, "drawdown size");
  simulate->add_option("--x", cfg.xs, "minimum tail level (repeatable)");
  simulate->add_option("--n", cfg.n, "number of episodes/paths");
  simulate->add_option("--eps", cfg.eps, "minimum-estimation censoring bound");
  simulate->add_option("--steps", cfg.steps, "fixed step count for martingale mode");

  CLI::App* embed = app.add_subcommand("embed", "Skorokhod embedding frequencies");
  add_common(embed);
  embed->add_option("--scheme", scheme, "dubins, ay, ay-minus or day");
  embed->add_option("--n", cfg.n, "number of embedding runs");

  CLI::App* report = app.add_subcommand("report", "alpha -> excess -> bounds -> simulate");
  add_common(report);
  report->add_option("--d", cfg.d, "drawdown size");
  report->add_option("--x", cfg.xs, "minimum tail level (repeatable)");
  report->add_option("--n", cfg.n, "number of episodes/paths");
  report->add_option("--eps", cfg.eps, "minimum-estimation censoring bound");
  report->add_option("--steps", cfg.steps, "fixed step count for martingale checks");

  CLI11_PARSE(app, argc, argv);

  if (format.empty()) {
    format = (bounds->parsed() || simulate->parsed()) ? "csv" : "text";
  }

  if (alpha->parsed()) cfg.subcommand = lundberg::Subcommand::alpha;
  if (excess->parsed()) {
    cfg.subcommand = lundberg::Subcommand::excess;
    if (has_cap) cfg.cap = cap;
  }
  if (bounds->parsed()) cfg.subcommand = lundberg::Subcommand::bounds;
  if (simulate->parsed()) {
    cfg.subcommand = lundberg::Subcommand::simulate;
    if (mode == "max") {
      cfg.mode = lundberg::SimulateMode::max;
    } else if (mode == "min") {
      cfg.mode = lundberg::SimulateMode::min;
    } else if (mode == "martingale") {
      cfg.mode = lundberg::SimulateMode::martingale;
    } else {
      std::cerr << "error: code=ParseError msg=\"unknown simulate mode '" << mode
                << "'\"\n";
      return 2;
    }
  }
  if (embed->parsed()) {
    cfg.subcommand = lundberg::Subcommand::embed;
    if (scheme == "dubins") {
      cfg.scheme = lundberg::EmbedScheme::dubins;
    } else if (scheme == "ay") {
      cfg.scheme = lundberg::EmbedScheme::ay;
    } else if (scheme == "ay-minus") {
      cfg.scheme = lundberg::EmbedScheme::ay_minus;
    } else if (scheme == "day") {
      cfg.scheme = lundberg::EmbedScheme::day;
    } else {
      std::cerr << "error: code=ParseError msg=\"unknown scheme '" << scheme
                << "'\"\n";
      return 2;
    }
  }
  if (report->parsed()) cfg.subcommand = lundberg::Subcommand::report;

  cfg.output = parse_format(format);
  return lundberg::run(cfg, std::cout, std::cerr);
}
