#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyb/api.hpp"
#include "hyb/parser.hpp"
#include "session.hpp"

using namespace hyb;

namespace {

const std::string kCorpus = HYB_CORPUS_DIR;
const std::string kTool = HYB_TOOL;

struct Result {
  int code;
  std::string out;
};

Result shell(const std::string& cmd) {
  Result r{-1, ""};
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hyb_cli_test_" + name)).string();
}

std::vector<std::string> lines_of(const std::string& file) {
  std::ifstream in(file);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

struct Repl {
  std::ostringstream out, err;
  cli::Session session{out, err};

  std::string run(const std::string& script) {
    std::istringstream in(script);
    session.run(in, false);
    return out.str();
  }
};

}  // namespace

TEST(Session, EvalCruise) {
  Repl r;
  const std::string out = r.run(":load " + kCorpus + "/cruise.hyb\n:eval 1.5\n");
  EXPECT_NE(out.find("value v=6.5\n"), std::string::npos);
  EXPECT_TRUE(r.err.str().empty());
}

TEST(Session, StepsCounterEndsInStop) {
  Repl r;
  const std::string out = r.run(":load " + kCorpus + "/counter.hyb\n:steps 0.5\n");
  const std::string tail = "stop x=1 t=0\n";
  ASSERT_GE(out.size(), tail.size());
  EXPECT_EQ(out.substr(out.size() - tail.size()), tail);
  EXPECT_NE(out.find("[asg, seq-skip]"), std::string::npos);
  EXPECT_NE(out.find("[wh-true]"), std::string::npos);
  EXPECT_NE(out.find("[diff-stop, seq-stop]"), std::string::npos);
}

TEST(Session, StepsLimit) {
  Repl r;
  const std::string out = r.run(":load " + kCorpus + "/cruise.hyb\n:steps 100 2\n");
  EXPECT_NE(out.find("(stopped after 2 steps)"), std::string::npos);
}

TEST(Session, TraceWritesCsv) {
  Repl r;
  const std::string file = temp_path("cruise.csv");
  r.run(":load " + kCorpus + "/cruise.hyb\n:trace 12 121 " + file + "\n");
  const auto lines = lines_of(file);
  ASSERT_EQ(lines.size(), 122u);
  EXPECT_EQ(lines[0], "t,v,marker");
  EXPECT_EQ(lines[1], "0,5,");
  EXPECT_EQ(lines[16], "1.5,6.5,");
  EXPECT_EQ(lines[121], "12,11,");
  std::filesystem::remove(file);
}

TEST(Session, SettingsAndErrorsKeepTheSession) {
  Repl r;
  r.run(":eval 1\n:load /nonexistent.hyb\n:fuel 0\n:fuel 50\n:set guard-tolerance 0.001\n:semantics big\n:bogus\n");
  EXPECT_EQ(r.session.fuel(), 50u);
  EXPECT_EQ(r.session.guard_tolerance(), 0.001);
  EXPECT_EQ(r.session.semantics(), cli::Semantics::big);
  EXPECT_FALSE(r.session.loaded());
  const std::string err = r.err.str();
  EXPECT_NE(err.find("no program loaded"), std::string::npos);
  EXPECT_NE(err.find("cannot open"), std::string::npos);
  EXPECT_NE(err.find("unknown command"), std::string::npos);
}

TEST(Session, ParseErrorPreservesLoadedProgram) {
  const std::string bad = temp_path("bad.hyb");
  std::ofstream(bad) << "x :=";
  Repl r;
  const std::string out = r.run(":load " + kCorpus + "/cruise.hyb\n:load " + bad + "\n:eval 6\n");
  EXPECT_NE(r.err.str().find("1:5:"), std::string::npos);
  EXPECT_NE(out.find("value v=11"), std::string::npos);
  std::filesystem::remove(bad);
}

TEST(Session, FuelAndQuit) {
  Repl r;
  const std::string out = r.run(":load " + kCorpus + "/zeno.hyb\n:fuel 1000\n:eval 2\n:quit\n:eval 1\n");
  EXPECT_NE(out.find("fuel\n"), std::string::npos);
  EXPECT_EQ(out.find("value"), std::string::npos);
}

TEST(Session, DenotationalReportsDivergence) {
  Repl r;
  const std::string out = r.run(":load " + kCorpus + "/zeno.hyb\n:semantics den\n:fuel 1000\n:eval 2\n");
  EXPECT_NE(out.find("fuel"), std::string::npos);
}

TEST(Batch, EvalExitCodes) {
  EXPECT_EQ(shell(kTool + " run " + kCorpus + "/cruise.hyb --at 1.5").code, 0);
  EXPECT_EQ(shell(kTool + " run " + kCorpus + "/cruise.hyb --at 1.5").out, "value v=6.5\n");
  EXPECT_EQ(shell(kTool + " run " + kCorpus + "/zeno.hyb --at 2").code, 2);
  EXPECT_EQ(shell(kTool + " run missing.hyb").code, 3);
  EXPECT_EQ(shell(kTool + " run missing.hyb --at 1").code, 3);
  const std::string bad = temp_path("bad2.hyb");
  std::ofstream(bad) << "x := ;";
  EXPECT_EQ(shell(kTool + " run " + bad + " --at 1").code, 3);
  EXPECT_EQ(shell(kTool + " run " + bad + " --at 1 --json").code, 3);
  std::filesystem::remove(bad);
}

TEST(Batch, TraceCsv) {
  const std::string file = temp_path("ball.csv");
  const Result r = shell(kTool + " run " + kCorpus + "/ball.hyb --trace 10 --samples 500 --out " + file);
  EXPECT_EQ(r.code, 0);
  const auto lines = lines_of(file);
  ASSERT_EQ(lines.size(), 501u);
  EXPECT_EQ(lines[0], "t,p,v,marker");
  EXPECT_EQ(lines[500].substr(0, 3), "10,");
  std::filesystem::remove(file);
}

TEST(Batch, JsonMatchesService) {
  std::ifstream in(kCorpus + "/cruise.hyb");
  std::stringstream src;
  src << in.rdbuf();
  nlohmann::ordered_json req;
  req["source"] = src.str();
  req["t"] = 5.5;
  req["semantics"] = "den";
  req["fuel"] = 1000000;
  req["guard_tolerance"] = 0.0;
  const Result r = shell(kTool + " run " + kCorpus + "/cruise.hyb --at 5.5 --semantics den --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, api::handle_eval(req.dump()).body + "\n");

  nlohmann::ordered_json treq;
  treq["source"] = src.str();
  treq["t_max"] = 12.0;
  treq["samples"] = 25;
  treq["fuel"] = 1000000;
  treq["guard_tolerance"] = 0.0;
  const Result t = shell(kTool + " run " + kCorpus + "/cruise.hyb --trace 12 --samples 25 --json");
  EXPECT_EQ(t.out, api::handle_trace(treq.dump()).body + "\n");
}

TEST(Batch, CheckFindsNoDiscrepancies) {
  const Result r = shell(kTool + " check --cases 300 --seed 9 --jobs 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
}

TEST(CsvFormat, MarkersLeaveValuesEmpty) {
  const Program p = parse("x := 1 ; while true { wait x ; x := 0.5*x }");
  const Trace tr = sem_trace(p.root, Env(1), 3, 4, DenOptions{1000, 0.0, std::nullopt});
  std::ostringstream out;
  cli::write_csv(out, tr, p.vars);
  EXPECT_NE(out.str().find("\n3,,fuel\n"), std::string::npos) << out.str();
  EXPECT_EQ(cli::trace_exit_code(tr), cli::kExitFuel);
}
