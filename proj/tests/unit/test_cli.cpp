#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "helpers.hpp"
#include "loewner/funcalc.hpp"
#include "loewner/serialize.hpp"

using namespace loewner;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("loewner-cli-test-" + std::to_string(::getpid()) + "-" +
                                         std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

Json run_json(std::vector<std::string> args, int expected_code) {
  args.push_back("--format");
  args.push_back("json");
  const Result r = run_cli(args);
  CHECK(r.code == expected_code);
  return Json::parse(r.out);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
  CHECK(run_cli({"check"}).code == cli::kUsage);
  const Result unknown = run_cli({"check", "monotone", "--fn", "r3", "--k", "2", "--format", "json"});
  CHECK(unknown.code == cli::kUsage);
  CHECK(unknown.err.find("error:") == 0);
  CHECK(run_cli({"check", "monotone", "--fn", "r1", "--format", "yaml"}).code == cli::kUsage);
  CHECK(run_cli({"--help"}).code == cli::kPass);
}

TEST_CASE("monotone pass and violation") {
  TempDir tmp;
  const Json pass = run_json({"check", "monotone", "--fn", "-1/(r1*r2)", "--k", "2", "--l", "2", "--j", "0",
                              "--dims", "2,2", "--trials", "200", "--seed", "1"},
                             cli::kPass);
  CHECK(pass["verdict"] == "pass");
  CHECK(pass["trials_run"] == 200);
  CHECK_FALSE(pass.contains("witness"));

  const std::string wpath = tmp.file("w.json");
  const Json viol = run_json({"check", "monotone", "--fn", "1", "--k", "2", "--l", "2", "--j", "0", "--dims",
                              "1,1", "--trials", "50", "--out", wpath},
                             cli::kViolation);
  CHECK(viol["verdict"] == "violation");
  CHECK(viol["witness_path"] == wpath);
  CHECK(fs::exists(wpath));

  const Result replayed = run_cli({"replay", wpath});
  CHECK(replayed.code == cli::kPass);
  CHECK(replayed.out.find("reproduced") != std::string::npos);
}

TEST_CASE("text mode writes the witness and reports the trial") {
  TempDir tmp;
  const std::string wpath = tmp.file("koranyi.json");
  const Result r = run_cli({"check", "convex", "--fn", "r1^2*r2^2/((1+r1)*(1+r2))", "--k", "2", "--dims", "2,2",
                            "--trials", "500", "--seed", "1", "--out", wpath});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("check convex: violation") == 0);
  CHECK(r.out.find("witness written to " + wpath) != std::string::npos);
  const Json w = read_json_file(wpath);
  CHECK(w["command"] == "convex");
  CHECK(w["margin"].get<double>() <= -1e-6);
  CHECK(run_cli({"replay", wpath, "--format", "json"}).code == cli::kPass);
}

TEST_CASE("every check subcommand runs") {
  TempDir tmp;
  auto w = [&](const char* n) { return tmp.file(n); };
  CHECK(run_cli({"check", "jensen-unitary", "--fn", "r1*r2", "--k", "2", "--l", "2", "--dims", "2,2",
                 "--trials", "200", "--seed", "4", "--out", w("ju.json")})
            .code == cli::kViolation);
  CHECK(run_cli({"replay", w("ju.json")}).code == cli::kPass);
  CHECK(run_cli({"check", "jensen-projection", "--fn", "r1*r2", "--k", "2", "--l", "2", "--dims", "2,2",
                 "--trials", "200", "--seed", "4", "--out", w("jp.json")})
            .code == cli::kViolation);
  CHECK(run_cli({"replay", w("jp.json")}).code == cli::kPass);
  CHECK(run_cli({"check", "jensen-unitary", "--fn", "constant(-1)", "--k", "2", "--l", "3", "--dims", "2,2",
                 "--trials", "50"})
            .code == cli::kPass);
  CHECK(run_cli({"check", "tensor-monotone", "--fn", "r1*r2", "--k", "2", "--dims", "2,2", "--trials", "100",
                 "--seed", "10"})
            .code == cli::kPass);

  const Result growth = run_cli({"check", "growth", "--fn", "-1/(r1*r2)", "--k", "2", "--box", "1,1", "--C", "1"});
  CHECK(growth.code == cli::kPass);
  CHECK(growth.out.find("min slack 0 at (") != std::string::npos);
  CHECK(run_cli({"check", "growth", "--fn", "-1/(r1^2*r2)", "--k", "2", "--box", "1,1", "--out", w("g.json")})
            .code == cli::kViolation);
  CHECK(run_cli({"replay", w("g.json")}).code == cli::kPass);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const std::vector<std::string> base{"check", "monotone", "--fn", "neg_inv_product", "--k", "2", "--l", "3",
                                      "--j", "1", "--dims", "2,2", "--trials", "150", "--seed", "5",
                                      "--format", "json"};
  auto with_threads = [&](const char* t) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(t);
    return run_cli(a).out;
  };
  const std::string one = with_threads("1");
  CHECK(one == with_threads("1"));
  CHECK(one == with_threads("4"));
}

TEST_CASE("funcalc reads operands from a file") {
  TempDir tmp;
  const std::string in = tmp.file("ops.json");
  write_text(in, "[[[1, 0], [0, 2]], [[3, 0], [0, 4]]]");
  const Json prod = run_json({"funcalc", in, "--fn", "r1*r2", "--k", "2"}, cli::kPass);
  const Matrix got = matrix_from_json(prod["result"]);
  CHECK((got - HermitianMatrix::diagonal({3.0, 4.0, 6.0, 8.0}).matrix()).norm() <= 1e-14);

  write_text(in, "{\"operands\": [[[1, 0], [0, 2]]]}");
  const Json sq = run_json({"funcalc", in, "--fn", "r1^2"}, cli::kPass);
  CHECK((matrix_from_json(sq["result"]) - HermitianMatrix::diagonal({1.0, 4.0}).matrix()).norm() <= 1e-14);

  Rng rng(13);
  const Matrix u = haar_unitary(3, rng);
  const HermitianMatrix a = HermitianMatrix::from_symmetrized(u * HermitianMatrix::diagonal({1.0, 2.0, 3.0}).matrix() * u.adjoint());
  const HermitianMatrix b = HermitianMatrix::from_symmetrized(u * HermitianMatrix::diagonal({4.0, 0.5, 2.0}).matrix() * u.adjoint());
  write_json_file(in, matrices_to_json({a.matrix(), b.matrix()}));
  const Json com = run_json({"funcalc", in, "--fn", "sqrt(r1)*r2", "--commuting"}, cli::kPass);
  const CompressionReport rep = compression_check(parse("sqrt(r1)*r2", 2), {a, b});
  CHECK((matrix_from_json(com["result"]) - rep.fcom.matrix()).norm() <= 1e-12);

  write_text(in, "[[[1, 1], [0, 2]]]");
  CHECK(run_cli({"funcalc", in, "--fn", "r1"}).code == cli::kUsage);
  CHECK(run_cli({"funcalc", tmp.file("missing.json"), "--fn", "r1"}).code == cli::kUsage);
}

TEST_CASE("dimension guard and override") {
  CHECK(run_cli({"check", "convex", "--fn", "r1", "--k", "1", "--dims", "5000", "--trials", "1"}).code ==
        cli::kUsage);
  ::setenv("LOEWNER_MAX_DIM", "3", 1);
  const Result small = run_cli({"check", "convex", "--fn", "r1*r2", "--k", "2", "--dims", "2,2", "--trials", "1"});
  ::unsetenv("LOEWNER_MAX_DIM");
  CHECK(small.code == cli::kUsage);
  CHECK(small.err.find("LOEWNER_MAX_DIM") != std::string::npos);
  CHECK(run_cli({"check", "convex", "--fn", "r1^2", "--k", "1", "--dims", "2", "--trials", "5"}).code ==
        cli::kPass);
}

TEST_CASE("verify-paper rejects tampered tolerances") {
  const Result loose = run_cli({"verify-paper", "--tol", "1e2"});
  CHECK(loose.code == cli::kUsage);
  CHECK(loose.out.find("configuration rejected") != std::string::npos);
  CHECK(run_cli({"verify-paper", "--tol", "0"}).code == cli::kUsage);
  CHECK(run_cli({"verify-paper", "--tol", "-1e-7"}).code == cli::kUsage);
}

TEST_CASE("replay of a tampered witness exits 1") {
  TempDir tmp;
  const std::string wpath = tmp.file("w.json");
  REQUIRE(run_cli({"check", "monotone", "--fn", "1", "--k", "2", "--dims", "1,1", "--trials", "50", "--out",
                   wpath})
              .code == cli::kViolation);
  Json w = read_json_file(wpath);
  w["margin"] = w["margin"].get<double>() + 0.5;
  write_json_file(wpath, w);
  CHECK(run_cli({"replay", wpath}).code == cli::kViolation);
  write_text(wpath, "{not json");
  CHECK(run_cli({"replay", wpath}).code == cli::kUsage);
}

}  // TEST_SUITE
