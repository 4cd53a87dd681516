#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frameforge/commands.hpp"
#include "frameforge/report.hpp"

namespace ff = frameforge;

namespace {

struct Common {
  std::string config_path;
  std::vector<ff::Index> ns;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string csv_path;
  std::string svg_path;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--Ns", c.ns, "Truncation indices, e.g. 4,8,16,32,64")->delimiter(',');
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--out", c.out_path, "Write the JSON report here instead of stdout");
  sub->add_option("--csv", c.csv_path, "Write the CSV table here");
  sub->add_option("--svg", c.svg_path, "Write an SVG trend plot here");
}

ff::RunConfig build_config(const Common& c) {
  ff::RunConfig cfg;
  if (!c.config_path.empty()) cfg = ff::config_from_json(ff::load_json_file(c.config_path), cfg);
  if (!c.ns.empty()) cfg.ns = c.ns;
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "frameforge: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int emit(const ff::CommandResult& r, const Common& c, const std::string& export_path) {
  const std::string text = ff::dump_report(r.report);
  bool ok = true;
  if (c.out_path.empty()) {
    std::cout << text;
  } else {
    ok = write_file(c.out_path, text) && ok;
  }
  if (!c.csv_path.empty() && r.csv) ok = write_file(c.csv_path, *r.csv) && ok;
  if (!c.svg_path.empty()) {
    if (r.svg) {
      ok = write_file(c.svg_path, *r.svg) && ok;
    } else {
      std::cerr << "frameforge: this command has no plot\n";
    }
  }
  if (!export_path.empty() && r.exported) ok = write_file(export_path, ff::dump_report(*r.exported)) && ok;
  if (r.report.contains("error")) std::cerr << "frameforge: " << r.report["error"]["message"].get<std::string>() << "\n";
  if (r.report.contains("diff")) std::cerr << "frameforge: expectations failed\n" << r.report["diff"].dump(2) << "\n";
  return ok ? r.exit_code : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame bounds, weights and multipliers at finite truncation"};
  app.set_version_flag("--version", ff::toolkit_version());
  app.require_subcommand(1);

  Common common;
  std::string spec_path, pair_path, export_path, action = "apply", preset;
  std::optional<double> bessel, reproducing;
  std::optional<ff::Index> finite_domain;
  bool verdict = false, dual = false;

  CLI::App* analyze = app.add_subcommand("analyze", "Frame bounds and trends across truncations");
  analyze->add_option("--spec", spec_path, "Sequence spec (JSON)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--export", export_path, "Write the largest truncation as an explicit spec");
  add_common(analyze, common);

  CLI::App* weigh = app.add_subcommand("weigh", "Weight synthesis and weighted-frame verdicts");
  weigh->add_option("--spec", spec_path, "Sequence spec (JSON)")->required()->check(CLI::ExistingFile);
  auto* o_bessel = weigh->add_option("--bessel", bessel, "Bessel weights with bound B");
  auto* o_verdict = weigh->add_flag("--verdict", verdict, "Weighted-frame verdict");
  auto* o_dual = weigh->add_flag("--dual", dual, "Reweight a weakly dual pair (needs --pair)");
  auto* o_repr = weigh->add_option("--reproducing", reproducing, "Reweight a reproducing pair to lower bound A");
  auto* o_fd = weigh->add_option("--finite-domain", finite_domain, "Lower bound on span(e_1..e_K)");
  weigh->add_option("--pair", pair_path, "Second sequence spec (JSON)")->check(CLI::ExistingFile);
  const std::vector<CLI::Option*> modes{o_bessel, o_verdict, o_dual, o_repr, o_fd};
  for (auto* a : modes) {
    for (auto* b : modes) {
      if (a != b) a->excludes(b);
    }
  }
  add_common(weigh, common);

  CLI::App* mult = app.add_subcommand("multiplier", "Frame multiplier diagnostics");
  mult->add_option("--spec", spec_path, "Multiplier spec (JSON)")->required()->check(CLI::ExistingFile);
  mult->add_option("--action", action, "apply|invert|unconditional|shift|interleave|duality")
      ->check(CLI::IsMember({"apply", "invert", "unconditional", "shift", "interleave", "duality"}));
  add_common(mult, common);

  CLI::App* repro = app.add_subcommand("reproduce", "Run a built-in counterexample with expectations");
  repro->add_option("--preset", preset, "e1-plus-en|n-e1-plus-en|finite-domain|interleave-identity")->required();
  add_common(repro, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ff::exit_code::kParse;
  }

  try {
    const ff::RunConfig cfg = build_config(common);
    ff::CommandResult r;
    if (analyze->parsed()) {
      r = ff::cmd_analyze(ff::load_json_file(spec_path), cfg);
    } else if (weigh->parsed()) {
      ff::WeighOptions opt;
      if (bessel) {
        opt.mode = ff::WeighOptions::Mode::Bessel;
        opt.bound = *bessel;
      } else if (dual) {
        opt.mode = ff::WeighOptions::Mode::Dual;
      } else if (reproducing) {
        opt.mode = ff::WeighOptions::Mode::Reproducing;
        opt.bound = *reproducing;
      } else if (finite_domain) {
        opt.mode = ff::WeighOptions::Mode::FiniteDomain;
        opt.domain_dim = *finite_domain;
      }
      if (!pair_path.empty()) opt.pair = ff::load_json_file(pair_path);
      r = ff::cmd_weigh(ff::load_json_file(spec_path), opt, cfg);
    } else if (mult->parsed()) {
      static const std::map<std::string, ff::MultiplierAction> kActions{
          {"apply", ff::MultiplierAction::Apply},         {"invert", ff::MultiplierAction::Invert},
          {"unconditional", ff::MultiplierAction::Unconditional}, {"shift", ff::MultiplierAction::Shift},
          {"interleave", ff::MultiplierAction::Interleave}, {"duality", ff::MultiplierAction::Duality}};
      r = ff::cmd_multiplier(ff::load_json_file(spec_path), kActions.at(action), cfg);
    } else {
      r = ff::cmd_reproduce(preset, cfg);
    }
    return emit(r, common, export_path);
  } catch (const ff::SpecError& e) {
    std::cerr << "frameforge: " << e.what() << "\n";
    return ff::exit_code::kParse;
  } catch (const ff::Json::exception& e) {
    std::cerr << "frameforge: " << e.what() << "\n";
    return ff::exit_code::kParse;
  }
}
