#include <doctest.h>

#include <sstream>

#include "fcontact/config.hpp"

using namespace fcontact;

namespace {

Json minimal_line_structure() {
  return Json::parse(R"({
    "chart": {"dim": 1, "coords": ["x1"], "box": [[-1, 1]]},
    "n": 0, "s": 1,
    "tensors": {"f": [["0"]], "xi": [["1"]], "eta": [["1"]], "g": [["1"]]}
  })");
}

}  // namespace

TEST_CASE("structure configs load, round-trip and reject malformed input") {
  const auto desc = parse_structure_config(minimal_line_structure());
  const auto S = build_structure(desc);
  CHECK(S.dim() == 1);
  const Json round = structure_config_json(desc);
  CHECK(parse_structure_config(round).coords == desc.coords);

  Json missing = minimal_line_structure();
  missing.erase("tensors");
  CHECK_THROWS_AS(parse_structure_config(missing), ConfigError);

  Json short_row = minimal_line_structure();
  short_row["tensors"]["f"] = Json::array({Json::array()});
  CHECK_THROWS_AS(build_structure(parse_structure_config(short_row)), ConfigError);

  Json bad_expr = minimal_line_structure();
  bad_expr["tensors"]["f"] = Json::array({Json::array({"x1 +"})});
  CHECK_THROWS_AS(build_structure(parse_structure_config(bad_expr)), ParseError);
}

TEST_CASE("the metric loader reads only the upper triangle") {
  const Json doc = Json::parse(R"({
    "chart": {"dim": 3, "coords": ["x1", "x2", "z"]},
    "n": 1, "s": 1,
    "tensors": {
      "f":   [["0","0","0"],["0","0","0"],["0","0","0"]],
      "xi":  [["0","0","1"]],
      "eta": [["0","0","1"]],
      "g":   [["1","x1","0"],["999","2","0"],["999","999","1"]]
    }
  })");
  const auto S = build_structure(parse_structure_config(doc));
  Point p(3);
  p << 0.5, 0.0, 0.0;
  CHECK(S.g.value(p)(1, 0) == 0.5);  // mirrored from the upper triangle
  CHECK(S.g.value(p)(0, 1) == 0.5);
}

TEST_CASE("catalog entries round-trip through their emitted configs") {
  const auto entry = catalog_get("s-model", 1, 2);
  const Json shown = catalog_entry_json(entry);
  const auto reloaded = build_structure(parse_structure_config(shown["base"]));
  const auto report = verify(reloaded, Level::S);
  CHECK(report.passed());
  const auto points = sample_points(entry.structure.chart, 16, 12);
  CHECK(structure_max_difference(entry.structure, reloaded, points) == 0.0);
}

TEST_CASE("pipelines type-check step shapes before running") {
  Json doc = Json::parse(R"({
    "catalog": {"name": "s-model", "n": 1, "s": 2},
    "steps": [{"op": "rotate", "matrix": [[0, 1], [1, 0]]}]
  })");
  CHECK_NOTHROW(parse_pipeline_config(doc));

  Json wrong = doc;
  wrong["steps"][0]["matrix"] = Json::parse("[[1, 0, 0],[0, 1, 0],[0, 0, 1]]");
  CHECK_THROWS_AS(parse_pipeline_config(wrong), ConfigError);

  // after a lift, s grows by one, so a 3x3 matrix becomes valid
  Json lifted = doc;
  lifted["steps"] = Json::parse(
      R"([{"op": "lift"}, {"op": "rotate", "matrix": [[1,0,0],[0,1,0],[0,0,1]]}])");
  CHECK_NOTHROW(parse_pipeline_config(lifted));

  // compare-to-input requires the shape back at the input
  Json compare = doc;
  compare["steps"] = Json::parse(R"([{"op": "lift"}, {"op": "compare-to-input"}])");
  CHECK_THROWS_AS(parse_pipeline_config(compare), ConfigError);

  Json unknown = doc;
  unknown["steps"] = Json::parse(R"([{"op": "frobnicate"}])");
  CHECK_THROWS_AS(parse_pipeline_config(unknown), ConfigError);

  Json no_source = Json::parse(R"({"steps": []})");
  CHECK_THROWS_AS(parse_pipeline_config(no_source), ConfigError);
}

TEST_CASE("a verify pipeline on the catalog exits zero with one report line") {
  Json doc = Json::parse(R"({
    "catalog": {"name": "s-model", "n": 1, "s": 2},
    "steps": [{"op": "verify", "level": "S"}]
  })");
  const auto pipeline = parse_pipeline_config(doc);
  std::ostringstream out;
  CHECK(run_pipeline(pipeline, out) == 0);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  const Json report = Json::parse(text);
  CHECK(report["step"] == "verify");
  CHECK(report["report"]["passed"] == true);
}

TEST_CASE("the lift-slice roundtrip pipeline compares clean against its input") {
  Json doc = Json::parse(R"({
    "catalog": {"name": "sasakian-model", "n": 1},
    "steps": [
      {"op": "lift"},
      {"op": "verify", "level": "S"},
      {"op": "slice"},
      {"op": "compare-to-input", "tol": 1e-10}
    ]
  })");
  const auto pipeline = parse_pipeline_config(doc);
  std::ostringstream out;
  CHECK(run_pipeline(pipeline, out) == 0);

  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const Json rep = Json::parse(line);
    ++count;
    if (rep["step"] == "compare-to-input") {
      CHECK(rep["passed"] == true);
      CHECK(rep["max_difference"].get<double>() <= 1e-10);
    }
  }
  CHECK(count == 4);
}

TEST_CASE("report streams are deterministic and round-trip byte for byte") {
  Json doc = Json::parse(R"({
    "catalog": {"name": "s-model", "n": 1, "s": 2},
    "sampling": {"count": 32, "seed": 7},
    "steps": [{"op": "verify", "level": "S"},
              {"op": "rotate", "matrix": [[0, 1], [1, 0]]},
              {"op": "verify", "level": "S"}]
  })");
  const auto pipeline = parse_pipeline_config(doc);
  std::ostringstream a, b;
  CHECK(run_pipeline(pipeline, a) == 0);
  CHECK(run_pipeline(pipeline, b) == 0);
  CHECK(a.str() == b.str());

  std::istringstream lines(a.str());
  std::string line;
  while (std::getline(lines, line)) {
    const Json parsed = Json::parse(line);
    CHECK(parsed.dump() == line);
  }
}

TEST_CASE("verification failures exit with code 1") {
  Json doc = Json::parse(R"({
    "structure": {
      "chart": {"dim": 1, "coords": ["x1"], "box": [[-1, 1]]},
      "n": 0, "s": 1,
      "tensors": {"f": [["0"]], "xi": [["2"]], "eta": [["1"]], "g": [["1"]]}
    },
    "steps": [{"op": "verify", "level": "S"}]
  })");
  const auto pipeline = parse_pipeline_config(doc);
  std::ostringstream out;
  CHECK(run_pipeline(pipeline, out) == 1);
}

TEST_CASE("type2 precondition violations surface as step errors") {
  Json doc = Json::parse(R"({
    "catalog": {"name": "s-model", "n": 1, "s": 2},
    "steps": [{"op": "type2",
               "theta": [["y1", "0", "0", "0"], ["0", "0", "0", "0"]]}]
  })");
  const auto pipeline = parse_pipeline_config(doc);
  std::ostringstream out;
  CHECK(run_pipeline(pipeline, out) == 1);
  const Json report = Json::parse(out.str());
  CHECK(report.contains("error"));
}
