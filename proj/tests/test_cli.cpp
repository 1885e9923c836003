#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = iset::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json invoke_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json-lines");
  auto r = invoke(args);
  REQUIRE(r.code == 0);
  return Json::parse(r.out);
}

// CSV body with the manifest comment lines removed.
std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::string strip_timestamp(Json j) {
  j["manifest"].erase("timestamp");
  return j.dump();
}

}  // namespace

TEST_CASE("padic commands") {
  CHECK(invoke_json({"padic", "norm", "1/3", "--p", "3"})["result"] == "3");
  CHECK(invoke_json({"padic", "dist", "1", "4", "--p", "3"})["result"] == "1/3");
  CHECK(invoke_json({"padic", "norm", "50", "--p", "5"})["result"] == "1/25");
  auto sum = invoke_json({"padic", "add", "1/3", "2/3", "--p", "3", "--K", "8"});
  CHECK(sum["manifest"]["command"] == "padic add");
  CHECK(sum["manifest"]["version"] == iset::cli::kVersion);
}

TEST_CASE("cantor commands") {
  auto iterate = invoke_json({"cantor", "iterate", "--p", "2", "--depth", "1"});
  CHECK(iterate["intervals"].size() == 2);
  auto dim = invoke_json({"cantor", "dim", "--p", "2"});
  CHECK(dim["result"] == "0.630930");
  CHECK(dim.contains("precision"));
  CHECK(invoke_json({"cantor", "encode", "3", "--p", "2", "--depth", "8"})["result"] == "8/9");
  auto csv = invoke({"--csv", "cantor", "iterate", "--p", "3", "--depth", "2", "--all-levels"});
  CHECK(csv.code == 0);
  CHECK(csv_rows(csv.out).size() == 1 + 1 + 3 + 9);
}

TEST_CASE("triangle commands") {
  CHECK(invoke_json({"triangle", "check", "1/2", "1/2", "--phase", "1/8", "--N", "8"})["result"] == "inadmissible");
  CHECK(invoke_json({"triangle", "third", "0", "0", "--phase", "1/2"})["result"] == "0");
  auto search = invoke_json({"triangle", "search", "--N", "4"});
  CHECK(search["count_searched"] == 7623);
  CHECK(search["admissible_count"] == 0);
}

TEST_CASE("chsh command") {
  auto standard = invoke_json({"chsh", "--standard", "--N", "10", "--n", "20000", "--seed", "7"});
  CHECK(standard["A_status"] == "Undefined");
  CHECK(standard["A_prime_exact"] == "181/64");
  CHECK(standard["diagnostics"].size() == 2);
  CHECK(standard["violation"] == true);

  auto value = invoke_json({"chsh", "--standard", "--no-is-rule", "--N", "10", "--n", "0"});
  CHECK(value["A_status"] == "Value");
  CHECK(value["A_value"] == "181/64");

  auto coarse = invoke_json({"chsh", "--standard", "--N", "2", "--n", "0"});
  CHECK(coarse["A_prime_exact"] == "3");
  CHECK(coarse["A_status"] == "Undefined");
}

TEST_CASE("snap command") {
  CHECK(invoke_json({"snap", "--cosine", "0.70710678", "--N", "10"})["result"] == "181/256");
  CHECK(invoke_json({"snap", "--cosine", "0.5", "--N", "10"})["result"] == "1/2");
  CHECK(invoke_json({"snap", "--phase", "0.3333", "--N", "4"})["result"] == "5/16");
}

TEST_CASE("sweep command") {
  auto chsh = invoke({"--csv", "sweep", "chsh-vs-N", "--range", "4..12"});
  REQUIRE(chsh.code == 0);
  auto rows = csv_rows(chsh.out);
  REQUIRE(rows.size() == 1 + 9);
  CHECK(rows[0].rfind("N,a_prime_exact", 0) == 0);

  auto dim = invoke({"--csv", "sweep", "dim-vs-p", "--range", "2..40"});
  auto dim_rows = csv_rows(dim.out);
  REQUIRE(dim_rows.size() == 1 + 39);
  double previous = 0;
  for (std::size_t k = 1; k < dim_rows.size(); ++k) {
    const auto first = dim_rows[k].find(',');
    const double value = std::stod(dim_rows[k].substr(first + 1));
    CHECK(value > previous);
    previous = value;
  }

  auto empty = invoke({"--csv", "sweep", "snap-error-vs-N", "--range", "9..3"});
  CHECK(empty.code == 0);
  CHECK(csv_rows(empty.out).size() == 1);

  const auto path = std::filesystem::temp_directory_path() / "iset_sweep_test.csv";
  auto written = invoke({"sweep", "dim-vs-p", "--range", "2..4", "--out", path.string()});
  CHECK(written.code == 0);
  std::ifstream file(path);
  std::stringstream contents;
  contents << file.rdbuf();
  CHECK(contents.str().find("# command: sweep dim-vs-p") != std::string::npos);
  CHECK(csv_rows(contents.str()).size() == 4);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"padic", "norm", "--p", "3"}).code == 2);
  CHECK(invoke({"padic", "norm", "x/y", "--p", "3"}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({"padic", "norm", "1/0", "--p", "3"}).code == 3);
  CHECK(invoke({"padic", "norm", "2", "--p", "4"}).code == 3);
  CHECK(invoke({"triangle", "check", "3/5", "1/2", "--phase", "1/4", "--N", "8"}).code == 3);
  CHECK(invoke({"cantor", "member", "3/2", "--p", "2"}).code == 3);
  auto budget = invoke({"triangle", "search", "--N", "8", "--budget", "1000"});
  CHECK(budget.code == 4);
  CHECK(budget.err.find("budget") != std::string::npos);
  CHECK(invoke({"cantor", "iterate", "--p", "3", "--depth", "40"}).code == 4);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("replay reproduces result bodies") {
  const std::vector<std::vector<std::string>> commands = {
      {"chsh", "--standard", "--N", "10", "--n", "5000", "--seed", "11"},
      {"triangle", "search", "--N", "3", "--with-right-angle"},
      {"cantor", "encode", "37", "--p", "5", "--depth", "6"},
  };
  for (const auto& command : commands) {
    auto first = invoke_json(command);
    auto second = invoke_json(command);
    CHECK(strip_timestamp(first) == strip_timestamp(second));
  }
}
