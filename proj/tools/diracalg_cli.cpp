#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "diracalg/runner.hpp"

using namespace diracalg;

namespace {

constexpr int kPass = 0, kFail = 1, kBadInput = 2;

struct Common {
  std::uint64_t seed = 0;
  int trials = 8;
  int max_degree = 2;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "run seed")->capture_default_str();
  app->add_option("--trials", c.trials, "random trials per identity")->capture_default_str()->check(CLI::Range(0, 10000));
  app->add_option("--max-degree", c.max_degree, "degree bound of random sections")->capture_default_str()->check(CLI::Range(0, 8));
  app->add_option("--out", c.out, "write the report here instead of stdout");
  app->add_option("--format", c.format, "report format")->capture_default_str()->check(CLI::IsMember({"json", "text"}));
}

void write(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

int report(const Instance& inst, const std::string& label, const std::string& suite, const Common& c) {
  CheckOptions opts{c.seed, c.trials, c.max_degree};
  Report rep = run_suite(inst, suite, opts);
  RunInfo info{label, suite, opts};
  write(c.out, c.format == "json" ? report_json(rep, info).dump(2) + "\n" : report_text(rep, info));
  return all_passed(rep) ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for Courant algebroids, LA-Dirac triples and Dirac bialgebroids"};
  app.require_subcommand(1);

  Common c;
  std::string suite, file, preset_name, emit;

  auto* check = app.add_subcommand("check", "run a check suite on an instance file");
  check->add_option("suite", suite, "suite")->required()->check(CLI::IsMember(suite_names()));
  check->add_option("file", file, "instance file")->required();
  add_common(check, c);

  auto* zoo = app.add_subcommand("zoo", "run all suites on a named preset, or export it");
  zoo->add_option("preset", preset_name, "preset")->required()->check(CLI::IsMember(preset_names()));
  zoo->add_option("--emit", emit, "write the preset as an instance file and exit");
  add_common(zoo, c);

  auto* lemmas = app.add_subcommand("lemmas", "verify the lemma identities on the triple of an instance");
  lemmas->add_option("file", file, "instance file")->required();
  add_common(lemmas, c);

  auto* manin = app.add_subcommand("build-manin", "serialize the Courant algebroid built from a triple");
  manin->add_option("file", file, "instance file")->required();
  manin->add_option("--out", c.out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  Instance inst;
  try {
    if (*zoo) inst = preset(preset_name);
    else inst = load_instance(file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }

  try {
    if (*check) return report(inst, file, suite, c);
    if (*lemmas) return report(inst, file, "lemmas", c);
    if (*zoo) {
      if (!emit.empty()) {
        write(emit, emit_instance(inst));
        return kPass;
      }
      return report(inst, preset_name, "all", c);
    }
    if (!inst.triple) throw MissingDataError("build-manin needs a [triple] block");
    AManinPair mp;
    try {
      mp = build_courant_C(inst.make_triple());
    } catch (const Error& e) {
      std::cerr << "failed: " << e.what() << "\n";
      return kFail;
    }
    write(c.out, manin_json(mp).dump(2) + "\n");
    return kPass;
  } catch (const MissingDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
}
