#include "support.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "diracalg/runner.hpp"

using namespace diracalg;
using namespace testing_support;

namespace {

const char* kPoissonText = R"([patch]
coords = x, y

[bundle.A]
rank = 2

[anchor.A]
row = 1, 0
row = 0, 1
)";

std::string error_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("diracalg_" + std::to_string(::getpid()) + "_" + name)).string();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(DIRACALG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST(Instance, PresetsRoundTrip) {
  for (const auto& name : preset_names()) {
    Instance inst = preset(name);
    std::string text = emit_instance(inst);
    Instance back = parse_instance(text);
    EXPECT_EQ(emit_instance(back), text) << name;
    EXPECT_EQ(back.algebroids.size(), inst.algebroids.size()) << name;
    for (const auto& [n, A] : inst.algebroids) {
      const DullAlgebroid& B = back.algebroid(n);
      EXPECT_EQ(B.rank(), A.rank());
      for (std::size_t i = 0; i < A.rank(); ++i) {
        EXPECT_EQ(B.anchor(unit_section(A.rank(), i)), A.anchor(unit_section(A.rank(), i)));
        for (std::size_t j = 0; j < A.rank(); ++j) EXPECT_EQ(B.structure(i, j), A.structure(i, j));
      }
    }
    for (const auto& [n, D] : inst.dorfmans) EXPECT_EQ(back.dorfmans.at(n).second.entries(), D.second.entries());
  }
}

TEST(Instance, ParsesHandWrittenFile) {
  std::string text = std::string(kPoissonText) + R"(
[bracket.A]   # zero entries may be omitted
1,2 = 0, 0

[subbundle.U]
ambient = 4
row = 0, x, 1, 0
row = -x, 0, 0, 1

[dorfman.D]
base = A
3,1 = 0, -1, 0, 0
4,1 = 1, 0, 0, 0

[triple]
algebroid = A
u = U
dorfman = D

[checks]
suites = la-dirac, lemmas
)";
  Instance inst = parse_instance(text);
  EXPECT_EQ(inst.suites, (std::vector<std::string>{"la-dirac", "lemmas"}));
  EXPECT_TRUE(all_passed(run_suite(inst, "la-dirac", {.trials = 2})));
}

TEST(Instance, RankMismatchedAnchorNamesDeclaration) {
  std::string err = error_of("[patch]\ncoords = x, y\n[bundle.A]\nrank = 2\n[anchor.A]\nrow = 1, 0, 0\nrow = 0, 1\n");
  EXPECT_NE(err.find("[anchor.A]"), std::string::npos) << err;
  EXPECT_NE(err.find("line 6"), std::string::npos) << err;
  EXPECT_NE(err.find("expected 2"), std::string::npos) << err;
}

TEST(Instance, SyntaxErrorHasPosition) {
  std::string err = error_of("[patch]\ncoords = x, y\n[pi]\nrow = 0, x^\nrow = -x, 0\n");
  EXPECT_NE(err.find("line 4, column 12"), std::string::npos) << err;
  EXPECT_NE(err.find("syntax error"), std::string::npos) << err;
}

TEST(Instance, Rejections) {
  EXPECT_NE(error_of("[bundle.A]\nrank = 1\n").find("[patch]"), std::string::npos);
  EXPECT_NE(error_of("[patch]\ncoords = x\n[anchor.B]\nrow = 1\n").find("undeclared bundle 'B'"), std::string::npos);
  EXPECT_NE(error_of("[patch]\ncoords = x\n[dorfman.D]\nbase = A\n").find("undeclared bundle 'A'"), std::string::npos);
  EXPECT_NE(error_of("[patch]\ncoords = x\n[bundle.A]\nrank = 1\nrank = 2\n").find("duplicate key"), std::string::npos);
  EXPECT_NE(error_of("[patch]\ncoords = x, y\n[pi]\nrow = 0, x\nrow = x, 0\n").find("not skew"), std::string::npos);
  EXPECT_NE(error_of("[patch]\ncoords = x\n[widget]\n").find("unknown block"), std::string::npos);
  EXPECT_NE(error_of("[patch]\ncoords = x\n[bundle.A]\nrank = 1\n[bracket.A]\n2,1 = 0\n").find("out of range"), std::string::npos);
  EXPECT_NE(error_of("[patch]\ncoords = x\nrank\n").find("key = value"), std::string::npos);
  EXPECT_NE(error_of("[patch]\ncoords = x, x\n").find("duplicate coordinate"), std::string::npos);
}

TEST(Runner, PoissonAllPasses) {
  Report r = run_suite(preset("poisson-xy"), "all", {.seed = 1, .trials = 2});
  EXPECT_TRUE(all_passed(r)) << show(r);
  EXPECT_TRUE(std::is_sorted(r.begin(), r.end(), [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; }));
}

TEST(Runner, NonClosedFormNamesImCondition2) {
  Report r = run_suite(preset("nonclosed-zdxdy"), "im2form", {.seed = 1});
  const CheckResult* c = find_check(r, "im2form.condition2");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_FALSE(c->witnesses.empty());
  EXPECT_TRUE(find_check(r, "im2form.iff_morphism")->passed);
}

TEST(Runner, MissingDataAndUnknownSuite) {
  EXPECT_THROW(run_suite(preset("aff1-bialgebra"), "la-dirac", {}), MissingDataError);
  EXPECT_THROW(run_suite(preset("aff1-bialgebra"), "nonsense", {}), MissingDataError);
}

TEST(Runner, JsonIsDeterministicApartFromTiming) {
  Instance inst = preset("presymplectic-dxdy");
  RunInfo info{"presymplectic-dxdy", "all", {.seed = 7, .trials = 2}};
  auto a = report_json(run_suite(inst, "all", info.opts), info);
  auto b = report_json(run_suite(inst, "all", info.opts), info);
  EXPECT_EQ(a["schema"], 1);
  a.erase("timing");
  b.erase("timing");
  EXPECT_EQ(a.dump(), b.dump());
  RunInfo other = info;
  other.opts.seed = 8;
  auto c = report_json(run_suite(inst, "all", other.opts), other);
  c.erase("timing");
  EXPECT_NE(a.dump(), c.dump());
}

TEST(Runner, FailureWitnessesReproduce) {
  // The dirac.closed witness for z dx^dy at frame(1,2) is [[(d_x, z dy), (d_y, -z dx)]].
  Report r = run_suite(preset("nonclosed-zdxdy"), "dirac", {});
  const CheckResult* c = find_check(r, "dirac_omega.closed");
  ASSERT_FALSE(c->passed);
  CourantPresentation C = standard_courant(xyz());
  auto D = dirac_from_2form(preset("nonclosed-zdxdy").omega.value());
  EXPECT_EQ(to_strings(C.bracket(D[0], D[1]), xyz()), c->witnesses[0].residual);
}

TEST(Cli, ExitCodes) {
  std::string good = temp_path("poisson.ini"), bad = temp_path("bad.ini"), out = temp_path("report.json");
  ASSERT_EQ(run_cli("zoo poisson-xy --emit " + good), 0);
  EXPECT_EQ(run_cli("check la-dirac " + good + " --trials 2 --out " + out), 0);
  auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(run_cli("zoo nonclosed-zdxdy --trials 2"), 1);
  std::string text = slurp(good);
  std::ofstream(bad) << text.substr(0, text.size() / 2) << "\n[pi]\nrow = 0, x^\n";
  EXPECT_EQ(run_cli("check all " + bad), 2);
  EXPECT_EQ(run_cli("check all /nonexistent/file.ini"), 2);
  EXPECT_EQ(run_cli("check nonsense " + good), 2);
  EXPECT_EQ(run_cli("check bialgebra " + good), 2);
  EXPECT_EQ(run_cli("lemmas " + good + " --trials 2 --format text"), 0);
  std::remove(good.c_str());
  std::remove(bad.c_str());
  std::remove(out.c_str());
}

TEST(Cli, BuildManinSerializesC) {
  std::string in = temp_path("presym.ini"), out = temp_path("manin.json");
  ASSERT_EQ(run_cli("zoo presymplectic-dxdy --emit " + in), 0);
  ASSERT_EQ(run_cli("build-manin " + in + " --out " + out), 0);
  auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["basis"].size(), 4u);
  EXPECT_EQ(j["pairing"].size(), 4u);
  EXPECT_EQ(j["bracket"].size(), 16u);
  std::remove(in.c_str());
  std::remove(out.c_str());
}
