#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "fixtures.hpp"
#include "restart/error.hpp"
#include "restart/io.hpp"
#include "restart/numeric.hpp"

using namespace restart;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidParameter;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = "restart_test_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("spec documents round-trip") {
  std::vector<DistributionSpec> specs = {fixtures::exponential(2.0), fixtures::weibull(0.5), fixtures::pareto(0.3),
                                         fixtures::levy(2.0),        fixtures::halves(),     fixtures::two_piece_exp(),
                                         fixtures::uniform(2.0)};
  specs.push_back(DistributionSpec{Exponential{1.0}, 0.25});
  for (const auto& spec : specs) {
    const Distribution a(spec);
    const Json doc = spec_to_json(spec);
    const Distribution b(spec_from_json(Json::parse(doc.dump())));
    CAPTURE(doc.dump());
    for (double t : {0.0, 0.3, 1.0, 1.25, 4.0}) CHECK(a.tail(t) == b.tail(t));
  }
}

TEST_CASE("tabulated documents") {
  const auto doc = Json::parse(R"({"family":"tabulated","grid":[0,1,2],"values":[0.8,0.5,0.25],"interpolation":"step"})");
  const Distribution d(spec_from_json(doc));
  CHECK(d.tail(1.5) == 0.5);
  const auto nested =
      Json::parse(R"({"family":"tabulated","params":{"grid":[0,2],"values":[1,0],"interpolation":"linear"}})");
  CHECK(Distribution(spec_from_json(nested)).tail(1.0) == doctest::Approx(0.5));
}

TEST_CASE("malformed documents") {
  CHECK(code_of([] { spec_from_json(Json::parse(R"({"params":{}})")); }) == ErrorCode::Parse);
  CHECK(code_of([] { spec_from_json(Json::parse(R"({"family":"gamma"})")); }) == ErrorCode::Parse);
  CHECK(code_of([] { spec_from_json(Json::parse(R"({"family":"weibull","params":{}})")); }) == ErrorCode::Parse);
  CHECK(code_of([] { spec_from_json(Json::parse(R"({"family":"weibull","params":{"shape":"x"}})")); }) ==
        ErrorCode::Parse);
  CHECK(code_of([] { read_spec_file("/nonexistent/spec.json"); }) == ErrorCode::Io);
  const auto bad = temp_file("bad.json", "{not json");
  CHECK(code_of([&] { read_spec_file(bad); }) == ErrorCode::Parse);
  std::remove(bad.c_str());
}

TEST_CASE("reset descriptors") {
  CHECK(parse_reset("det:0.5").kind == ResetLaw::Kind::Deterministic);
  CHECK(parse_reset("det:0.5").parameter == 0.5);
  CHECK(parse_reset("exp:2").kind == ResetLaw::Kind::Exponential);
  const auto path = temp_file("uniform.json", R"({"family":"tabulated","grid":[0,2],"values":[1,0],"interpolation":"linear"})");
  const auto g = parse_reset("file:" + path);
  CHECK(g.kind == ResetLaw::Kind::General);
  CHECK(g.tail(1.0) == doctest::Approx(0.5));
  std::remove(path.c_str());
  CHECK(code_of([] { parse_reset("det"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_reset("det:abc"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_reset("gamma:1"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_reset("det:-1"); }) == ErrorCode::InvalidPeriod);
}

TEST_CASE("csv and numbers") {
  std::ostringstream out;
  write_csv(out, {"t", "v"}, {{0.0, 0.5}, {1.0, kInf}});
  CHECK(out.str() == "t,v\n0,1\n0.5,inf\n");
  CHECK(number(kInf) == "inf");
  CHECK(number(1.5) == 1.5);
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("reports serialise") {
  Check c{"x", Verdict::Fails, 0.25, 1e-12, {0.5, 0.75}, 10, ""};
  const Json j = to_json(c);
  CHECK(j["verdict"] == "fails");
  CHECK(j["witness"].size() == 2);
  SimulationResult s;
  s.mean = kInf;
  CHECK(to_json(s)["mean"] == "inf");
}
