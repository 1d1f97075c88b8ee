#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "ffprog/error.hpp"
#include "ffprog/harness.hpp"
#include "ffprog/numeric.hpp"

namespace {

using nlohmann::json;
namespace h = ffprog::harness;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailedCheck = 2;

struct Bound {
  const h::OptionSpec* spec;
  CLI::Option* option;
  std::string text;
  bool flag = false;
};

json flag_value(const Bound& b) {
  switch (b.spec->type) {
    case h::OptType::Flag: return b.flag;
    case h::OptType::Text: return b.text;
    default: return b.text;  // coerced by resolve_config
  }
}

int run_experiment(const std::string& name, const std::vector<Bound>& bound, const std::string& config_path,
                   const std::string& out_path, const std::string& csv_path, unsigned jobs, bool timing) {
  json file = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ffprog::Error(ffprog::ErrorKind::Usage, "cannot open config " + config_path);
    file = json::parse(in);
  }
  json flags = json::object();
  for (const auto& b : bound)
    if (b.option->count() > 0) flags[b.spec->name] = flag_value(b);
  const auto& spec = h::command_spec(name);
  json cfg = h::resolve_config(spec, file, flags);

  const auto outcome = h::run_command(name, cfg, {jobs, timing});

  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file_out.open(out_path, std::ios::app);
    if (!file_out) throw ffprog::Error(ffprog::ErrorKind::Usage, "cannot write " + out_path);
    out = &file_out;
  }
  for (const auto& rec : outcome.records) *out << h::envelope(name, cfg, outcome.seed, rec).dump() << '\n';
  json tail{{"type", "status"},
            {"ok", outcome.failures.empty()},
            {"failures", outcome.failures},
            {"warnings", outcome.warnings}};
  *out << h::envelope(name, cfg, outcome.seed, tail).dump() << '\n';
  out->flush();

  if (!csv_path.empty() && !outcome.csv_header.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw ffprog::Error(ffprog::ErrorKind::Usage, "cannot write " + csv_path);
    csv << h::csv_line(outcome.csv_header) << '\n';
    for (const auto& row : outcome.csv_rows) csv << h::csv_line(row) << '\n';
  }
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : outcome.failures) std::cerr << "failed: " << f << '\n';
  return outcome.failures.empty() ? kExitOk : kExitFailedCheck;
}

// "polys" also answers to the singular spelling.
std::string option_names(const std::string& name) {
  return name == "polys" ? "--polys,--poly" : "--" + name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-field polynomial progression experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned jobs = 0;
  std::string config_path, out_path, csv_path;
  bool timing = false;
  app.add_option("--jobs", jobs, "worker threads (default: FFPROG_JOBS or logical cores)");
  app.add_option("--config", config_path, "JSON file with option values");
  app.add_option("--out", out_path, "append JSON-lines records here instead of stdout");
  app.add_option("--csv", csv_path, "write the CSV export here");
  app.add_flag("--timing", timing, "include wall-clock fields (output is then not bit-identical)");
  app.set_version_flag("--version", h::kToolVersion);

  std::map<std::string, std::vector<Bound>> bound;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : h::command_specs()) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    subs[spec.name] = sub;
    auto& list = bound[spec.name];
    list.reserve(spec.options.size());
    for (const auto& o : spec.options) {
      list.push_back(Bound{&o, nullptr, {}, false});
      Bound& b = list.back();
      std::string help = o.help;
      if (!o.default_value.is_null()) help += " [" + (o.default_value.is_string() ? o.default_value.get<std::string>()
                                                                                 : o.default_value.dump()) + "]";
      if (o.type == h::OptType::Flag) b.option = sub->add_flag("--" + o.name, b.flag, help);
      else b.option = sub->add_option(option_names(o.name), b.text, help);
    }
  }
  std::vector<int> only;
  auto* acc = app.add_subcommand("acceptance", "run the acceptance criteria; exit 0 iff all pass");
  acc->add_option("--only", only, "criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (jobs == 0) jobs = ffprog::default_jobs();

  try {
    if (acc->parsed()) {
      const auto results = ffprog::acceptance::run({only, jobs}, std::cout);
      const bool ok = ffprog::acceptance::all_pass(results);
      std::cout << (ok ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << std::endl;
      return ok ? kExitOk : kExitFailedCheck;
    }
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return run_experiment(name, bound[name], config_path, out_path, csv_path, jobs, timing);
  } catch (const ffprog::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
