#include "doctest.h"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "spidernet/free_meixner.hpp"

using namespace spidernet;
using namespace spidernet::cli;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "spidernet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// CSV body as numbers; the header goes to `header`.
std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) {
    header->clear();
    std::istringstream h(line);
    std::string f;
    while (std::getline(h, f, ',')) header->push_back(f);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream r(line);
    std::string f;
    while (std::getline(r, f, ',')) {
      row.push_back(f == "true" ? 1.0 : f == "false" ? 0.0 : std::strtod(f.c_str(), nullptr));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("number formatting uses 15 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(0.125) == "0.125");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1e-20 / 3.0) == "3.33333333333333e-21");
}

TEST_CASE("simulate: reduced rows, full agreement, start row") {
  const Result reduced = invoke({"simulate", "4", "6", "3", "--reduced", "--steps", "650"});
  REQUIRE(reduced.code == 0);
  const auto rows = parse_csv(reduced.out);
  CHECK(rows.size() == 651);
  CHECK(rows[0][1] == 1.0);

  const Result full = invoke({"simulate", "4", "6", "3", "--full", "--steps", "8"});
  REQUIRE(full.code == 0);
  const auto full_rows = parse_csv(full.out);
  REQUIRE(full_rows.size() == 9);
  for (std::size_t n = 0; n < full_rows.size(); ++n) {
    for (std::size_t k = 0; k < full_rows[n].size(); ++k) CHECK(std::abs(full_rows[n][k] - rows[n][k]) < 1e-10);
  }
  CHECK(invoke({"simulate", "4", "6", "3", "--full", "--reduced"}).code != 0);
  CHECK(invoke({"simulate", "--pq", "0.5", "0.25", "--steps", "3"}).code == 0);
  CHECK(invoke({"simulate", "--pq", "0.5", "0.25", "--full"}).code != 0);
}

TEST_CASE("spectrum: trace, multiplicities, ordering") {
  for (const auto& [args, r] : std::vector<std::pair<std::vector<std::string>, double>>{
           {{"spectrum", "4", "6", "3", "--cutoff", "8"}, 1.0 / 3.0},
           {{"spectrum", "3", "3", "2", "--cutoff", "8"}, 0.0},
           {{"spectrum", "--pq", "0.5", "0.2", "0.3", "--cutoff", "8"}, 0.3}}) {
    const Result res = invoke(args);
    REQUIRE(res.code == 0);
    std::vector<std::string> header;
    const auto rows = parse_csv(res.out, &header);
    const Table ref{header, {}};
    const double formula = (2 * r - 1) * 7;
    double mult = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i][ref.column("trace_formula")] == doctest::Approx(formula));
      CHECK(rows[i][ref.column("trace_basis")] == doctest::Approx(formula).epsilon(1e-12));
      CHECK(rows[i][ref.column("trace_spectral")] == doctest::Approx(formula).epsilon(1e-10));
      if (i > 0) CHECK(rows[i][ref.column("theta")] > rows[i - 1][ref.column("theta")]);
      mult += rows[i][ref.column("multiplicity")];
    }
    CHECK(mult == 3 * 8 - 1);
    CHECK(rows.back()[ref.column("lambda")] == -1.0);
    CHECK(rows.back()[ref.column("multiplicity")] == (r > 0 ? 6 : 8));
  }
}

TEST_CASE("amplitude table") {
  const Result res = invoke({"amplitude", "4", "6", "3", "--n-max", "1000"});
  REQUIRE(res.code == 0);
  const auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 1001);
  CHECK(rows[0][1] == doctest::Approx(1.0));
  for (std::size_t n = 0; n <= 200; ++n) CHECK(rows[n][3] < 1e-8);
  for (std::size_t n = 900; n <= 1000; ++n) CHECK(std::abs(rows[n][2] - rows[n][4]) < 1e-2);
  CHECK(invoke({"amplitude", "4", "6", "3", "-l", "2", "-m", "1", "--n-max", "5"}).code == 0);
}

TEST_CASE("localize") {
  auto rows = parse_csv(invoke({"localize", "4", "6", "3"}).out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][8] == 1.0);
  CHECK(rows[0][9] == 0.125);
  rows = parse_csv(invoke({"localize", "10", "12", "9"}).out);
  CHECK(rows[0][8] == 0.0);

  const Result sweep = invoke({"localize", "--sweep", "50", "49"});
  REQUIRE(sweep.code == 0);
  rows = parse_csv(sweep.out);
  CHECK(rows.size() == 49 * 50 / 2);
  for (const auto& row : rows) CHECK(row[8] == row[10]);
}

TEST_CASE("return probability window") {
  const Result res = invoke({"figure2"});
  REQUIRE(res.code == 0);
  const auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 31);
  CHECK(rows.front()[0] == 620);
  CHECK(rows.back()[0] == 650);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i][3] == 0.125);
    const bool peak = (i == 0 || rows[i][2] >= rows[i - 1][2]) &&
                      (i + 1 == rows.size() || rows[i][2] >= rows[i + 1][2]);
    if (peak) CHECK(std::abs(rows[i][1] - rows[i][2]) < 0.02);
  }
}

TEST_CASE("classical random walk") {
  const Result res = invoke({"rwalk", "4", "6", "3", "--n-max", "12"});
  REQUIRE(res.code == 0);
  const auto rows = parse_csv(res.out);
  const FreeMeixnerLaw law = law_from_pq(params_from_spidernet({4, 6, 3}));
  CHECK(rows[0][1] == doctest::Approx(1.0));
  for (int n = 0; n <= 12; ++n) CHECK(std::abs(rows[static_cast<std::size_t>(n)][1] - oracle::jacobi_moment(law, n)) < 1e-10);
  const auto tree = parse_csv(invoke({"rwalk", "3", "3", "2", "--n-max", "300"}).out);
  CHECK(tree.back()[1] < 1e-3);
  CHECK(tree.back()[2] < 1e-3);
}

TEST_CASE("verify passes") {
  const Result res = invoke({"verify"});
  CHECK(res.code == 0);
  CHECK(res.err.empty());
  for (const auto& row : parse_csv(res.out)) CHECK(row[1] == 1.0);
}

TEST_CASE("graph export") {
  const Result res = invoke({"graph", "2", "3", "2", "--radius", "2"});
  REQUIRE(res.code == 0);
  CHECK(res.out == "0:0 1:0\n0:0 1:1\n1:0 2:0\n1:0 2:1\n1:1 2:2\n1:1 2:3\n");
  const auto json = nlohmann::json::parse(invoke({"graph", "2", "3", "2", "-R", "1", "--format", "json"}).out);
  CHECK(json.size() == 2);
  CHECK(json[1]["v"] == "1:1");
}

TEST_CASE("JSON mirrors CSV") {
  const Result csv = invoke({"simulate", "4", "6", "3", "--steps", "5"});
  const Result json = invoke({"simulate", "4", "6", "3", "--steps", "5", "--format", "json"});
  REQUIRE(json.code == 0);
  std::vector<std::string> header;
  const auto rows = parse_csv(csv.out, &header);
  const auto records = nlohmann::json::parse(json.out);
  REQUIRE(records.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(records[i].size() == header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
      CHECK(records[i][header[k]].get<double>() == rows[i][k]);
    }
  }
}

TEST_CASE("output is deterministic") {
  CHECK(invoke({"figure2"}).out == invoke({"figure2"}).out);
  CHECK(invoke({"spectrum", "4", "6", "3", "-N", "12"}).out == invoke({"spectrum", "4", "6", "3", "-N", "12"}).out);
}

TEST_CASE("output files and the output directory variable") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "spidernet_cli_test";
  std::filesystem::create_directories(dir);
  ::setenv("SPIDERNET_OUTPUT_DIR", dir.c_str(), 1);
  const Result res = invoke({"localize", "4", "6", "3", "-o", "loc.csv"});
  ::unsetenv("SPIDERNET_OUTPUT_DIR");
  CHECK(res.code == 0);
  CHECK(res.out.empty());
  std::ifstream in(dir / "loc.csv");
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == invoke({"localize", "4", "6", "3"}).out);
  std::filesystem::remove_all(dir);

  const Result bad = invoke({"localize", "4", "6", "3", "-o", "/nonexistent/dir/x.csv"});
  CHECK(bad.code != 0);
  CHECK(nlohmann::json::parse(bad.err)["error"] == "OutputError");
}

TEST_CASE("errors are machine readable") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"localize", "4", "6", "6"},
           {"simulate", "3", "4", "2", "--full", "--steps", "2"},
           {"spectrum", "4", "6", "3", "-N", "1"},
           {"spectrum", "4", "6", "3", "--pq", "0.5", "0.5", "-N", "3"},
           {"amplitude", "--pq", "0.2", "0.5"},
           {"rwalk", "--pq", "0.7", "0.5"},
           {"localize"},
           {"simulate", "4", "6", "3", "--format", "xml"},
           {}}) {
    const Result res = invoke(args);
    CHECK(res.code != 0);
    const auto err = nlohmann::json::parse(res.err);
    CHECK(err.contains("error"));
    CHECK(err.contains("message"));
  }
  CHECK(nlohmann::json::parse(invoke({"localize", "4", "6", "6"}).err)["error"] == "InvalidParams");
  CHECK(nlohmann::json::parse(invoke({"simulate", "3", "4", "2", "--full"}).err)["error"] ==
        "UnrealizableWiring");
  CHECK(nlohmann::json::parse(invoke({"amplitude", "--pq", "0.2", "0.5"}).err)["error"] == "ParamsOutOfRange");
}

TEST_CASE("help exits cleanly") {
  const Result res = invoke({"--help"});
  CHECK(res.code == 0);
  CHECK(res.out.find("simulate") != std::string::npos);
}

}
