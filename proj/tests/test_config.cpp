#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rpf/driver.hpp"
#include "rpf/error.hpp"
#include "rpf/theorem.hpp"

using namespace rpf;
using nlohmann::json;

namespace {

json fixture_json(const std::string& name) { return json::parse(fx::read_file(fx::config_path(name))); }

Error config_error(const json& j) {
  try {
    parse_config(j.dump());
  } catch (const Error& e) {
    return e;
  }
  FAIL("config was accepted");
  return Error(ErrorKind::InvalidArgument, "unreachable");
}

json without_clock(json report) {
  report.erase("wall_clock_seconds");
  return report;
}

}  // namespace

TEST_CASE("shipped fixtures parse") {
  const Config pair = fx::load("pairing.json");
  CHECK(pair.code.source().size() == 4);
  CHECK(pair.code.target_size() == 2);
  CHECK(pair.measure.mode == MeasureMode::LabelWeights);
  CHECK(pair.run.steps == 10000);
  CHECK(pair.run.seed == 3);
  CHECK(pair.expectations.multiplicity == 1);
  for (const char* name : {"golden_point.json", "identity_golden.json", "run_choice.json", "phase.json",
                           "phase_pairing.json", "golden_range3.json"}) {
    CHECK_NOTHROW(fx::load(name));
  }
  CHECK(fx::load("golden_range3.json").potential.range() == 3);
  CHECK_NOTHROW(parse_config(fx::read_file(fx::data_path("pairing_presentation.json"))));
}

TEST_CASE("defaults are filled into the effective config") {
  json j = fixture_json("phase.json");
  j.erase("run");
  const Config c = parse_config(j.dump());
  CHECK(c.run.steps == 100000);
  CHECK(c.run.batches == 20);
  CHECK(c.run.tol_abs == 1e-3);
  CHECK(c.run.max_block_len == 6);
  CHECK(c.run.l_check == 8);
  CHECK(c.run.effective_burn_in() == 1000);
  CHECK(c.effective["run"]["steps"] == 100000);
  CHECK(c.effective["potential"]["beta"] == 0.5);
  const json e = c.effective;
  CHECK(parse_config(e.dump()).digest() == c.digest());
}

TEST_CASE("validation errors") {
  json beta = fixture_json("pairing.json");
  beta["potential"]["beta"] = 1.5;
  const Error b = config_error(beta);
  CHECK(b.kind() == ErrorKind::ValidationError);
  CHECK(std::string(b.what()).find("beta") != std::string::npos);

  json missing = fixture_json("identity_golden.json");
  missing["potential"] = {{"range", 2},
                          {"values", json::array({{{"word", {"g0", "g0"}}, {"value", 0.0}},
                                                  {{"word", {"g0", "g1"}}, {"value", 0.0}}})}};
  const Error m = config_error(missing);
  CHECK(m.kind() == ErrorKind::ValidationError);
  CHECK(std::string(m.what()).find("potential.values incomplete") != std::string::npos);

  json several = fixture_json("pairing.json");
  several["run"]["steps"] = 5;
  several["run"]["batches"] = 1;
  const std::string msg = config_error(several).what();
  CHECK(msg.find("steps") != std::string::npos);
  CHECK(msg.find("batches") != std::string::npos);

  json unknown = fixture_json("pairing.json");
  unknown["run"]["stepz"] = 5;
  CHECK(config_error(unknown).kind() == ErrorKind::ValidationError);

  json rho = fixture_json("pairing.json");
  rho["system"]["code"]["rho"]["p0"] = "7";
  CHECK(config_error(rho).kind() == ErrorKind::UnknownSymbol);

  json reducible = fixture_json("phase.json");
  reducible["system"]["transitions"] = json::array({json::array({"a", "a"}), json::array({"b", "b"}), json::array({"a", "b"})});
  CHECK(config_error(reducible).kind() == ErrorKind::NotIrreducible);
}

TEST_CASE("parse errors carry the line") {
  const std::string text = "{\n  \"system\": {\n    \"alphabet_x\": [\"a\",, \"b\"]\n  }\n}\n";
  try {
    parse_config(text);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("fnv1a digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  Config c = fx::load("pairing.json");
  const std::string d = c.digest();
  c.set_seed(99);
  CHECK(c.digest() != d);
  CHECK(c.run.seed == 99);
}

TEST_CASE("run_command examples") {
  const auto pair = run_command("verify", fx::load("pairing.json"));
  CHECK(pair.exit_code == 0);
  CHECK(pair.report["multiplicity"] == 1);
  CHECK(pair.report["passed"] == true);
  CHECK(pair.trace_csv.rfind("batch,exponent_index,estimate\n", 0) == 0);

  const auto wrong = run_command("verify", parse_config(fx::read_file(fx::data_path("phase_expect_mult1.json"))));
  CHECK(wrong.exit_code == 2);
  CHECK(wrong.report["passed"] == false);
  CHECK(wrong.report["lyapunov"]["multiplicity"] == 2);

  const auto id = run_command("class-degree", fx::load("identity_golden.json"));
  CHECK(id.exit_code == 0);
  CHECK(id.report["class_degree"]["value"] == 1);

  for (const auto& name : command_names()) {
    const auto r = run_command(name, fx::load("phase_pairing.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.report["command"] == name);
    CHECK(r.report.contains("config_digest"));
  }
  CHECK_THROWS_AS(run_command("nope", fx::load("phase.json")), Error);
}

TEST_CASE("structural failures map to exit 3") {
  // asking for more exponents than the dimension is an input error; a
  // measure generating words outside L(Z) is structural
  Config c = fx::load("phase.json");
  c.run.num_exponents = 5;
  const auto r = run_command("lyapunov", c);
  CHECK(r.exit_code == 1);
  CHECK(r.report["error"]["kind"] == "DimensionTooSmall");

  const auto lang = run_command("pressure", parse_config(fx::read_file(fx::data_path("golden_full_presentation.json"))));
  CHECK(lang.exit_code == 3);
  CHECK(lang.report["error"]["kind"] == "LanguageMismatch");

  CHECK(exit_code_for(Error(ErrorKind::RoutingOverlap, "x")) == 3);
  CHECK(exit_code_for(Error(ErrorKind::LanguageMismatch, "x")) == 3);
  CHECK(exit_code_for(Error(ErrorKind::ValidationError, "x")) == 1);
  CHECK(error_report("verify", Error(ErrorKind::ParseError, "x"))["exit_code"] == 1);
}

TEST_CASE("number_json encodes non-finite values") {
  CHECK(number_json(1.5) == 1.5);
  CHECK(number_json(INFINITY) == "inf");
  CHECK(number_json(-INFINITY) == "-inf");
  CHECK(number_json(NAN).is_null());
}

TEST_CASE("reports are deterministic and round-trip") {
  for (const char* name : {"pairing.json", "phase_pairing.json", "run_choice.json", "golden_range3.json"}) {
    const Config c = fx::load(name);
    const auto a = run_command("verify", c);
    const auto b = run_command("verify", c);
    CHECK(without_clock(a.report).dump(2) == without_clock(b.report).dump(2));
    CHECK(a.trace_csv == b.trace_csv);
    CHECK(json::parse(a.report.dump()) == a.report);
  }
  Config c = fx::load("run_choice.json");
  const auto a = run_command("lyapunov", c);
  c.set_seed(c.run.seed + 1);
  CHECK(without_clock(run_command("lyapunov", c).report) != without_clock(a.report));
}

TEST_CASE("experiment preparation") {
  const Experiment ex = prepare_experiment(fx::load("golden_range3.json"));
  CHECK(ex.recoded_block == 3);
  CHECK(ex.phi.range() <= 2);
  const Experiment pp = prepare_experiment(fx::load("phase_pairing.json"));
  CHECK(pp.p == 4);
  CHECK(experiment_orbit(pp).symbols.size() == pp.steps + pp.burn_in);

  const Experiment pres = prepare_experiment(parse_config(fx::read_file(fx::data_path("pairing_presentation.json"))));
  REQUIRE(pres.measure_language);
  CHECK(pres.measure_language->subset_of_image);
}

TEST_CASE("decomposition word follows the orbit") {
  const CodeSpec rc = fx::run_choice();
  const auto cert = minimal_transition_block(rc, 4);
  const Word orbit = rc.parse_target("a a a b a a b a b b a a a a");
  const Word w = decomposition_word(orbit, cert);
  CHECK(!window_positions(w, cert).empty());
  CHECK(w.size() <= 3 * cert.W.size() + 4);
  CHECK(decomposition_word(Word{}, cert) == cert.W);
}
