#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rmt/cli.hpp"
#include "rmt/errors.hpp"
#include "rmt/parallel.hpp"
#include "rmt/pdfs.hpp"

using namespace rmt;

namespace {
struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) v.push_back(line);
  return v;
}
}  // namespace

TEST_CASE("number lists accept fractions") {
  CHECK(parse_number_list("0,1/2,1") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_number_list("-3/2, 2.5") == std::vector<double>{-1.5, 2.5});
  CHECK(parse_number_list("").empty());
  CHECK_THROWS_AS(parse_number("1/0"), InvalidSpec);
  CHECK_THROWS_AS(parse_number("abc"), InvalidSpec);
  CHECK_THROWS_AS(parse_number_list("1,"), InvalidSpec);
  CHECK_THROWS_AS(parse_number("1/2/3"), InvalidSpec);
}

TEST_CASE("histogram rows") {
  std::vector<double> xs;
  RngStream r(7, 0);
  for (int i = 0; i < 10000; ++i) xs.push_back(-std::log1p(-r.uniform()));
  const auto rows = lines(emit_histogram(xs, 20, 0.0, 5.0));
  REQUIRE(rows.size() == 21);
  CHECK(rows[0] == "bin_left,bin_right,count,density_estimate");
  long total = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 4);
    total += std::stol(cells[2]);
  }
  CHECK(total <= 10000);
  CHECK(total > 9900);

  // Exact column passes the supplied density through unchanged.
  auto exact = [](double x) { return std::exp(-x); };
  const auto with = lines(emit_histogram(xs, 4, 0.0, 2.0, exact));
  CHECK(with[0] == "bin_left,bin_right,count,density_estimate,exact_density");
  const std::string last = with[1].substr(with[1].rfind(',') + 1);
  CHECK(std::stod(last) == exp(-0.25));

  const auto empty = lines(emit_histogram(xs, 3, 100.0, 200.0));
  REQUIRE(empty.size() == 4);
  CHECK(empty[1].find(",0,0") != std::string::npos);
  CHECK_THROWS_AS(emit_histogram(xs, 1, 0.0, 1.0), InvalidParams);
}

TEST_CASE("sample CSV") {
  const Outcome o = call({"sample", "--parity", "even", "--m", "1", "--M", "1", "--nu", "0", "--b0", "elementary",
                          "--samples", "10000", "--seed", "7", "--output", "csv"});
  CHECK(o.code == kExitOk);
  const auto rows = lines(o.out);
  CHECK(rows.size() == 10001);
  CHECK(rows[0] == "sample_index,lambda_1");
  CHECK(rows[1].rfind("0,", 0) == 0);
  CHECK(o.out.find('\r') == std::string::npos);

  const Outcome two = call({"sample", "--m", "2", "--samples", "10", "--output", "csv"});
  CHECK(lines(two.out)[0] == "sample_index,lambda_1,lambda_2");

  const Outcome hist = call({"sample", "--samples", "2000", "--bins", "10", "--range", "0,5", "--with-density"});
  CHECK(hist.code == kExitOk);
  const auto hrows = lines(hist.out);
  CHECK(hrows.size() == 11);
  // At m = M = 1 the density is exp(-lambda) (see the density subcommand test).
  const std::string mid = hrows[1].substr(hrows[1].rfind(',') + 1);
  CHECK(std::stod(mid) == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
}

TEST_CASE("output is identical for every thread count") {
  const std::vector<std::string> base{"sample", "--m", "2", "--M", "1", "--samples", "3000", "--seed", "11",
                                      "--output", "csv"};
  auto with_threads = [&](const char* t) {
    auto a = base;
    a.insert(a.end(), {"--threads", t});
    return call(a).out;
  };
  CHECK(with_threads("1") == with_threads("3"));

  const Outcome h1 = call({"verify-hc", "--group", "orth_odd", "--m", "2", "--x", "0.5,1.5", "--y", "0.7,1.1",
                           "--samples", "5000", "--threads", "1"});
  const Outcome h3 = call({"verify-hc", "--group", "orth_odd", "--m", "2", "--x", "0.5,1.5", "--y", "0.7,1.1",
                           "--samples", "5000", "--threads", "4"});
  CHECK(h1.out == h3.out);
}

TEST_CASE("thread count precedence") {
  ::setenv("RMT_THREADS", "3", 1);
  CHECK(resolve_workers(std::nullopt) == 3u);
  CHECK(resolve_workers(2u) == 2u);
  ::unsetenv("RMT_THREADS");
  CHECK(resolve_workers(std::nullopt) >= 1u);
}

TEST_CASE("verify-hc report") {
  const Outcome o = call({"verify-hc", "--group", "orth_even", "--m", "1", "--x", "1", "--y", "1", "--samples",
                          "100000", "--seed", "7"});
  CHECK(o.code == kExitOk);
  const auto j = nlohmann::json::parse(o.out);
  for (const char* key : {"name", "statistic", "p_value", "passed", "seed", "n_samples"}) CHECK(j.contains(key));
  CHECK(j["details"]["exact_rhs"].get<double>() == doctest::Approx(1.543081).epsilon(1e-6));
  CHECK(std::abs(j["details"]["z_score"].get<double>()) < 3.0);
  CHECK(j["seed"] == 7);
}

TEST_CASE("other subcommands") {
  const Outcome d = call({"density", "--m", "1", "--M", "1", "--nu", "0", "--lambda", "1"});
  CHECK(d.code == kExitOk);
  CHECK(nlohmann::json::parse(d.out)["density"].get<double>() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  const Outcome c = call({"density", "--kind", "complex", "--nu", "0", "--lambda", "2"});
  CHECK(nlohmann::json::parse(c.out)["density"].get<double>() == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));

  const Outcome h = call({"heat-check", "--m", "2", "--parity", "odd"});
  CHECK(h.code == kExitOk);
  CHECK(nlohmann::json::parse(h.out).size() == 2);

  const Outcome b = call({"biorth-check", "--M", "1", "--nu", "0", "--n-max", "2"});
  CHECK(b.code == kExitOk);

  const Outcome v = call({"verify-density", "--parity", "odd", "--nu", "0", "--b0", "gaussian", "--samples", "5000"});
  CHECK(v.code == kExitOk);

  const Outcome k = call({"verify-correspondence", "--case", "prop56", "--samples", "5000"});
  CHECK(k.code == kExitOk);
  CHECK(nlohmann::json::parse(k.out)["n_samples"] == 5000);

  // The literal Gamma(1/2, 1, 3/2) reference for the Gaussian odd case is rejected.
  const Outcome lit = call({"verify-correspondence", "--case", "prop57", "--samples", "20000", "--shapes",
                            "1/2,1,3/2"});
  CHECK(lit.code == kExitTestFailure);
}

TEST_CASE("results go to --out") {
  const std::string path = "test_cli_out.json";
  const Outcome o = call({"verify-hc", "--group", "unitary", "--N", "2", "--x", "0.3,1.2", "--y", "0.4,0.9",
                          "--samples", "2000", "--out", path});
  CHECK(o.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(nlohmann::json::parse(ss.str())["name"] == "hc_unitary_2");
  std::remove(path.c_str());
}

TEST_CASE("usage errors exit 2 with a synopsis") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"no-such-command"},
           {"sample", "--bogus-flag"},
           {"sample", "--parity", "sideways"},
           {"sample", "--samples", "0"},
           {"sample", "--nu", "1/3"},
           {"sample", "--bins", "5"},
           {"verify-hc", "--group", "orth_even"},
           {"verify-hc", "--group", "orth_even", "--m", "2", "--x", "1,1", "--y", "1,2"},
           {"verify-correspondence", "--m", "3"}}) {
    const Outcome o = call(args);
    INFO(o.err);
    CHECK(o.code == kExitUsage);
    CHECK(!o.err.empty());
  }
  CHECK(call({"no-such-command"}).err.find("Subcommands") != std::string::npos);
}
