#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rumin/cli.hpp"

using namespace rumin;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rumin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("spectrum export of functions") {
  const auto s3 = invoke({"spectrum", "--model", "s3", "--op", "delta-rn", "--max-weight", "4", "--degree", "0"});
  CHECK(s3.code == 0);
  CHECK(s3.out.rfind("degree,block,eigenvalue,multiplicity,nu,lambda10,lambda01\n", 0) == 0);
  CHECK(s3.out.find("\n0,0,0,1,") != std::string::npos);

  const auto twisted = invoke({"spectrum", "--model", "lens", "--p", "2", "--character", "1", "--degree", "0"});
  CHECK(twisted.code == 0);
  std::istringstream rows(twisted.out);
  std::string line;
  std::getline(rows, line);
  int n = 0;
  for (; std::getline(rows, line); ++n) {
    std::string degree, block, value;
    std::istringstream cells(line);
    std::getline(cells, degree, ',');
    std::getline(cells, block, ',');
    std::getline(cells, value, ',');
    CHECK(std::stod(value) > 0.0);
  }
  CHECK(n > 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({"spectrum", "--max-weight", "-1"}).code == 2);
  CHECK(invoke({"spectrum", "--op", "delta-x"}).code == 2);
  CHECK(invoke({"verify", "--model", "lens", "--p", "2", "--character", "2"}).code == 2);
  CHECK(invoke({"verify", "--suite", "thm9"}).code == 2);
  CHECK(invoke({"verify", "--t-samples", "0"}).code == 2);
  CHECK(invoke({"torsion", "--s-grid", "0.5"}).code == 2);
  CHECK(invoke({"torsion", "--s-grid", "2,8"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"spectrum", "--bogus"}).code == 2);
  CHECK(invoke({"spectrum", "--help"}).code == 0);
}

TEST_CASE("verify suites and exit status") {
  const auto all = invoke({"verify", "--suite", "all", "--model", "s3", "--max-weight", "4"});
  CHECK(all.code == 0);
  CHECK(all.err.empty());
  const auto j = nlohmann::json::parse(all.out);
  CHECK(j["schema"] == 1);
  CHECK(j["pass"] == true);
  CHECK(j["reports"].size() == 8);

  CHECK(invoke({"verify", "--suite", "thm5", "--model", "lens", "--p", "3", "--character", "2"}).code == 0);

  const auto strict = invoke({"verify", "--suite", "all", "--max-weight", "2", "--tol", "1e-30"});
  CHECK(strict.code == 1);
  CHECK(strict.err.find("FAIL ") != std::string::npos);
  CHECK(strict.err.find("residual") != std::string::npos);
  CHECK(nlohmann::json::parse(strict.out)["pass"] == false);
}

TEST_CASE("torsion command") {
  const auto s3 = invoke({"torsion", "--model", "s3", "--s-grid", "2,3"});
  CHECK(s3.code == 0);
  const auto j = nlohmann::json::parse(s3.out);
  REQUIRE(j["torsion"]["kappa_lhs"].size() == 2);
  for (const auto& v : j["torsion"]["kappa_lhs"]) CHECK(v.is_number());

  const auto lens = invoke({"torsion", "--model", "lens", "--p", "2"});
  CHECK(lens.code == 0);
  CHECK(nlohmann::json::parse(lens.out)["torsion"]["degrees"][0]["harmonic"] == 1);
}

TEST_CASE("config precedence and byte-stable output") {
  const std::string path = "rumin_cli_test_config.json";
  {
    std::ofstream f(path);
    f << R"({"model": "lens", "p": 3, "character": 1, "max_weight": 2, "format": "csv"})";
  }
  const auto from_file = invoke({"spectrum", "--config", path, "--degree", "1"});
  const auto explicit_flags =
      invoke({"spectrum", "--model", "lens", "--p", "3", "--character", "1", "--max-weight", "2", "--degree", "1"});
  CHECK(from_file.code == 0);
  CHECK(from_file.out == explicit_flags.out);
  const auto overridden = invoke({"spectrum", "--config", path, "--character", "0", "--degree", "1", "--format", "json"});
  CHECK(nlohmann::json::parse(overridden.out)["config"]["character"] == 0);
  {
    std::ofstream f(path);
    f << R"({"colour": 1})";
  }
  CHECK(invoke({"spectrum", "--config", path}).code == 2);
  std::remove(path.c_str());

  const auto a = invoke({"verify", "--suite", "sec4", "--max-weight", "3"});
  const auto b = invoke({"verify", "--suite", "sec4", "--max-weight", "3"});
  CHECK(a.out == b.out);
  CHECK(a.out.find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("json numbers use 17 significant digits") {
  CHECK(cli::dump_json(nlohmann::json::parse(R"({"b": [0.1, 2], "a": null})")) ==
        "{\n  \"a\": null,\n  \"b\": [\n    0.10000000000000001,\n    2\n  ]\n}");
}
