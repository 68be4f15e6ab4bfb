#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "codedxbar/cli.hpp"
#include "codedxbar/errors.hpp"
#include "codedxbar/pattern_io.hpp"

using namespace codedxbar;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "codedxbar");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/codedxbar_test_" + name;
  std::ofstream(path) << content;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("pattern files") {
  auto spec = parse_pattern(R"({"inputs": 2, "outputs": 3, "flows": [
      {"input": 0, "fanout": [0, 1, 2], "rate": "2/3"},
      {"input": 1, "fanout": [2], "rate": 0.01}]})");
  CHECK(spec.pattern.num_flows() == 2);
  CHECK(spec.pattern.num_subflows() == 4);
  REQUIRE(spec.rates);
  CHECK((*spec.rates)[0] == Rational(2, 3));
  CHECK((*spec.rates)[1] == Rational(1, 100));

  auto bare = parse_pattern(R"({"inputs": 1, "outputs": 1, "flows": [{"input": 0, "fanout": [0]}]})");
  CHECK_FALSE(bare.rates);

  auto where = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
    try {
      parse_pattern(text);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  // syntax error on line 3
  CHECK(where("{\"inputs\": 1,\n\"outputs\": 1,\n\"flows\": [,]}").first == 3);
  // out-of-range output: the position falls on the offending token
  const std::string text = "{\"inputs\": 1, \"outputs\": 1,\n \"flows\": [{\"input\": 0, \"fanout\": [7]}]}";
  const auto pos = where(text);
  CHECK(pos.first == 2);
  const std::size_t seven = text.find('7') - text.find('\n');  // 1-based column on line 2
  CHECK(pos.second == seven);
  CHECK(where(R"({"inputs": 1, "outputs": 1, "flows": [{"input": 3, "fanout": [0]}]})").first == 1);
  CHECK(where(R"({"inputs": 1, "outputs": 2, "flows": [{"input": 0, "fanout": [0, 0]}]})").first == 1);
  CHECK(where(R"({"inputs": 1, "outputs": 1, "flows": [{"input": 0, "fanout": [0], "rate": "-1/2"}]})") ==
        std::pair<std::size_t, std::size_t>{1, 75});
  CHECK(where(R"({"inputs": 1, "outputs": 2, "flows": [{"input": 0, "fanout": [0], "rate": 1},
               {"input": 0, "fanout": [1]}]})").first != 0);
  CHECK(where("[1, 2]").first != 0);

  CHECK(parse_rate_list("1/2, 1/3,0.25") == RateVector{Rational(1, 2), Rational(1, 3), Rational(1, 4)});
  CHECK(parse_rate_list("[\"1/2\", 0.5]") == RateVector{Rational(1, 2), Rational(1, 2)});
  CHECK_THROWS_AS(parse_rate_list("1/0"), Error);
}

TEST_CASE("alpha ranges") {
  auto a = cli::parse_alpha_range("0.6:1.5:0.1");
  REQUIRE(a.size() == 10);
  CHECK(a.front() == Rational(3, 5));
  CHECK(a.back() == Rational(3, 2));
  CHECK(cli::parse_alpha_range("1/2,1") == std::vector<Rational>{Rational(1, 2), 1});
  CHECK_THROWS_AS(cli::parse_alpha_range("1:0:0"), ParseError);
}

TEST_CASE("analyze") {
  auto r = invoke({"analyze", "--pattern", "fig1"});
  REQUIRE(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["chi_f"] == "1/1");
  CHECK(doc["in_region"] == true);
  CHECK(doc["split"] == true);
  CHECK(doc["perfect"] == true);
  CHECK(doc["graph"]["vertices"] == 6);
  CHECK(doc["graph"]["edges"] == 6);

  doc = json::parse(invoke({"analyze", "--pattern", "2xN:4"}).out);
  CHECK(doc["perfect"] == true);
  CHECK(doc["speedup"] == "1/1");

  doc = json::parse(invoke({"analyze", "--pattern", "fig1", "--alpha", "6/5"}).out);
  CHECK(doc["speedup"] == "6/5");
  CHECK(doc["in_region"] == false);

  // byte-identical on repeat
  CHECK(invoke({"analyze", "--pattern", "sim4x3"}).out == invoke({"analyze", "--pattern", "sim4x3"}).out);
}

TEST_CASE("schedule") {
  auto r = invoke({"schedule", "--pattern", "fig1"});
  REQUIRE(r.code == 0);
  const auto table = r.out.substr(r.out.find("\nslot") + 1);
  const auto rows = lines(table);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto arrow = rows[i].find("(1, {1,2,3}) -> ");
    REQUIRE(arrow != std::string::npos);
    // two outputs per slot for the multicast
    CHECK(rows[i].substr(arrow + 16, 3).find(',') == 1);
  }

  auto doc = json::parse(invoke({"schedule", "--pattern", "fig1", "--json"}).out);
  CHECK(doc["frame_length"] == 3);
  CHECK(doc["chi_f"] == "1/1");

  const auto one = temp_file("unicast.json",
                             R"({"inputs": 1, "outputs": 1, "flows": [{"input": 0, "fanout": [0], "rate": 1}]})");
  doc = json::parse(invoke({"schedule", "--pattern", one, "--json"}).out);
  CHECK(doc["frame_length"] == 1);

  doc = json::parse(invoke({"schedule", "--pattern", "2xN:5", "--json"}).out);
  CHECK(doc["frame_length"] == 5);
  for (const auto& slot : doc["slots"]) {
    int broadcast = 0;
    for (int v : slot) broadcast += v < 5;
    CHECK(broadcast == 4);
  }

  r = invoke({"schedule", "--pattern", "fig1", "--rates", "1,1,1,1"});
  CHECK(r.code == cli::kOutOfRegion);
  CHECK(r.err.find("chi_f = 3/1") != std::string::npos);
}

TEST_CASE("region") {
  auto r = invoke({"region", "--2xN", "3", "2/3", "1/3", "1/3", "1/3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("7/3 > 2") != std::string::npos);
  CHECK(r.out.find("uncoded scale: 7/6") != std::string::npos);
  CHECK(r.out.find("coded speedup: 1/1") != std::string::npos);

  r = invoke({"region", "--2xN", "2", "1/2", "1/2", "1/2"});
  CHECK(r.out.find("uncoded scale: 1/1") != std::string::npos);

  r = invoke({"region", "--2xN", "3", "0", "0", "0", "0"});
  CHECK(r.out.find(" > ") == std::string::npos);
}

TEST_CASE("simulate and sweep") {
  auto r = invoke({"simulate", "--pattern", "fig1", "--policy", "offline", "--slots", "999", "--seed", "7"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("alpha,policy,seed,", 0) == 0);
  CHECK(rows[1].find(",offline,") != std::string::npos);

  auto doc = json::parse(invoke({"simulate", "--pattern", "fig1", "--policy", "offline", "--slots", "999",
                                 "--seed", "7", "--json"})
                             .out);
  CHECK(doc["decode_failures"] == 0);

  r = invoke({"simulate", "--pattern", "fig1", "--policy", "uncoded-rand", "--alpha", "1.0", "--slots", "20000"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[1].find(",false,") != std::string::npos);

  r = invoke({"sweep", "--pattern", "sim4x3", "--policies", "mwss-rand,uncoded-rand", "--alphas", "0.6:1.5:0.1",
              "--slots", "1000", "--delta", "50"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 21);

  const std::string path = "/tmp/codedxbar_test_sweep.csv";
  std::remove(path.c_str());
  std::vector<std::string> args{"sweep",  "--pattern", "fig1", "--policies", "uncoded-rand", "--alphas",
                                "1/2,1", "--slots",   "2000", "--out",      path};
  r = invoke(args);
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream first;
  first << in.rdbuf();
  CHECK(lines(first.str()).size() == 3);
  invoke(args);
  std::ifstream again(path);
  std::stringstream second;
  second << again.rdbuf();
  CHECK(first.str() == second.str());
}

TEST_CASE("exit codes") {
  const auto bad = temp_file("bad.json", "{\n  \"inputs\": 2,\n  \"flows\": [ ,\n}\n");
  auto r = invoke({"analyze", "--pattern", bad});
  CHECK(r.code == cli::kParse);
  CHECK(r.err.find("line 3") != std::string::npos);

  CHECK(invoke({"analyze", "--pattern", "/nonexistent/p.json"}).code == cli::kParse);
  CHECK(invoke({"simulate", "--pattern", "fig1", "--policy", "fifo"}).code == cli::kParse);
  CHECK(invoke({"bogus"}).code == cli::kParse);
  CHECK(invoke({"analyze", "--pattern", "fig1", "--rates", "1/2"}).code == cli::kParse);
  CHECK(invoke({"analyze", "--pattern", "2xN:40"}).code == cli::kSizeCap);
  CHECK(invoke({"schedule", "--pattern", "sim4x3", "--alpha", "2"}).code == cli::kOutOfRegion);
  CHECK(invoke({"simulate", "--pattern", "fig1", "--policy", "offline", "--alpha", "2"}).code ==
        cli::kOutOfRegion);
}
