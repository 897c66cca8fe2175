#include <doctest.h>

#include <sstream>

#include "mvlsw/cli.hpp"
#include "mvlsw/io.hpp"
#include "test_support.hpp"

using namespace mvlsw;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mvlsw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors exit 2 and print usage") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {}, {"frobnicate"}, {"estimate", "--in", "x.csv", "--out", "o", "--bogus"}, {"fixture", "--out", "o"}}) {
    const auto r = run(args);
    CHECK(r.code == 2);
    CHECK(r.out.find("Usage") != std::string::npos);
    CHECK(r.err.starts_with("error: UsageError: "));
    CHECK(lines(r.err) == 1);
  }
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("estimate") != std::string::npos);
}

TEST_CASE("end-to-end workflow") {
  ScratchDir dir;
  auto p = [&](const char* name) { return (dir / name).string(); };

  REQUIRE(run({"fixture", "--eq3", "--length", "256", "--out", p("spec")}).code == 0);
  const auto spec = load_bundle(p("spec"));
  CHECK(spec.length() == 256);
  CHECK(spec.channels() == 3);

  REQUIRE(run({"simulate", "--spectrum", p("spec"), "--seed", "7", "--out", p("x.csv")}).code == 0);
  const auto x = load_timeseries(p("x.csv"));
  CHECK(x.length() == 256);
  CHECK(x.channels() == 3);

  const auto est = run({"estimate", "--in", p("x.csv"), "--kernel", "modified-daniell", "--param", "8",
                        "--bias-correct", "--out", p("est")});
  REQUIRE(est.code == 0);
  CHECK(est.err.empty());
  CHECK(est.out.find("length=256") != std::string::npos);
  CHECK(est.out.find("gcv=") != std::string::npos);
  const auto s = load_bundle(p("est"));
  CHECK(s.meta().bias_corrected);
  REQUIRE(s.meta().min_eigenvalue.has_value());
  CHECK(*s.meta().min_eigenvalue >= 1e-10 * (1 - 1e-3));

  REQUIRE(run({"coherence", "--in", p("est"), "--out", p("coh")}).code == 0);
  REQUIRE(run({"coherence", "--in", p("est"), "--partial", "--out", p("pcoh")}).code == 0);
  const auto coh = load_bundle(p("coh"));
  for (double v : coh.data()) CHECK(std::abs(v) <= 1.0 + 1e-12);

  REQUIRE(run({"ci", "--in", p("est"), "--out-lower", p("lo"), "--out-upper", p("hi"), "--out-variance",
               p("var")})
              .code == 0);
  const auto lo = load_bundle(p("lo")), hi = load_bundle(p("hi"));
  for (std::size_t i = 0; i < s.data().size(); ++i) {
    CHECK(lo.data()[i] <= s.data()[i]);
    CHECK(hi.data()[i] >= s.data()[i]);
  }

  REQUIRE(run({"bootstrap", "--in", p("est"), "--reps", "5", "--out-median", p("bmed")}).code == 0);
  CHECK(load_bundle(p("bmed")).same_shape(s));

  REQUIRE(run({"plot", "--in", p("est"), "--style", "1", "--info", "1,2,2", "--interval", p("lo"), p("hi"),
               "--out", p("s1.svg")})
              .code == 0);
  CHECK(read_file(dir / "s1.csv").starts_with("k,p1q2j2,p1q2j2_lower,p1q2j2_upper\n"));
  REQUIRE(run({"plot", "--in", p("pcoh"), "--style", "2", "--info", "2", "--no-diag", "--out", p("s2.svg")})
              .code == 0);
  CHECK(read_file(dir / "s2.csv").starts_with("k,p1q2,p1q3,p2q3\n"));
  REQUIRE(run({"plot", "--in", p("est"), "--style", "4", "--info", "1,1", "--out", p("s4.csv")}).code == 0);
  CHECK(lines(read_file(dir / "s4.csv")) == s.levels());
}

TEST_CASE("domain errors exit 1 with one error line") {
  ScratchDir dir;
  auto p = [&](const char* name) { return (dir / name).string(); };
  REQUIRE(run({"fixture", "--eq3", "--length", "64", "--out", p("spec")}).code == 0);

  auto expect = [](const Run& r, const std::string& code) {
    CHECK(r.code == 1);
    CHECK(r.err.starts_with("error: " + code + ": "));
    CHECK(lines(r.err) == 1);
  };
  expect(run({"simulate", "--spectrum", p("missing"), "--out", p("x.csv")}), "IoError");
  write_file(dir / "bad.csv", "a,b\n1,2\n3,abc\n");
  expect(run({"estimate", "--in", p("bad.csv"), "--out", p("e")}), "ParseError");
  write_file(dir / "odd.csv", "1\n2\n3\n4\n5\n");
  expect(run({"estimate", "--in", p("odd.csv"), "--pad", "error", "--out", p("e")}), "NonDyadicLength");
  expect(run({"plot", "--in", p("spec"), "--style", "1", "--info", "1,2", "--out", p("a.svg")}), "InfoMismatch");
  expect(run({"plot", "--in", p("spec"), "--style", "4", "--info", "1,2", "--interval", p("spec"), p("spec"),
              "--out", p("a.svg")}),
         "InfoMismatch");
  expect(run({"ci", "--in", p("spec"), "--out-lower", p("l"), "--out-upper", p("u")}), "DomainError");
}

TEST_CASE("simulate is reproducible from its seed") {
  ScratchDir dir;
  auto p = [&](const char* name) { return (dir / name).string(); };
  REQUIRE(run({"fixture", "--eq3", "--length", "64", "--out", p("spec")}).code == 0);
  REQUIRE(run({"simulate", "--spectrum", p("spec"), "--seed", "3", "--out", p("a.csv")}).code == 0);
  REQUIRE(run({"simulate", "--spectrum", p("spec"), "--seed", "3", "--out", p("b.csv")}).code == 0);
  REQUIRE(run({"simulate", "--spectrum", p("spec"), "--seed", "4", "--out", p("c.csv")}).code == 0);
  CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
  CHECK(read_file(dir / "a.csv") != read_file(dir / "c.csv"));
}
