#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <sstream>

#include "chorgate/bpmn/parse.hpp"
#include "chorgate/report/cli.hpp"
#include "chorgate/report/render.hpp"
#include "chorgate/requirements/document.hpp"
#include "fixtures.hpp"

using namespace chorgate;
using chorgate::testing::fixture_path;

namespace {

conformance::ValidationReport report_with(std::size_t tp, std::size_t fn, std::size_t fp, std::size_t tn) {
    conformance::ValidationReport r;
    r.model_name = "Sample, Inc";
    r.requirement_count = 4;
    auto add = [&](std::size_t n, Polarity p, bool realized) {
        for (std::size_t i = 0; i < n; ++i) {
            conformance::ScenarioVerdict v;
            v.scenario = "s" + std::to_string(r.verdicts.size());
            v.requirement = "r";
            v.polarity = p;
            v.realized = realized;
            r.verdicts.push_back(v);
        }
    };
    add(tp, Polarity::expected_valid, true);
    add(fn, Polarity::expected_valid, false);
    add(fp, Polarity::expected_invalid, true);
    add(tn, Polarity::expected_invalid, false);
    r.matrix = conformance::classify(r.verdicts);
    r.metrics = conformance::compute_metrics(r.matrix);
    return r;
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "chorgate");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("csv row") {
    const auto row = report::render(report_with(9, 3, 0, 1), report::Format::csv);
    CHECK(row == "\"Sample, Inc\",4,12,1,9,3,0,1,77%,100%,75%\n");
    auto back = report::parse_csv_row(row);
    REQUIRE(back);
    CHECK(back->process == "Sample, Inc");
    CHECK(back->requirements == 4);
    CHECK(back->valid_scenarios == 12);
    CHECK(back->invalid_scenarios == 1);
    CHECK(back->matrix == ConfusionMatrix{9, 3, 0, 1});
    CHECK(back->accuracy == "77%");
    CHECK(back->precision == "100%");
    CHECK(back->recall == "75%");
    CHECK(report::csv_header().find("accuracy,precision,recall") != std::string::npos);
}

TEST_CASE("empty scenario set renders N/A") {
    const auto row = report::render(report_with(0, 0, 0, 0), report::Format::csv);
    CHECK(row.find(",0,0,0,0,0,0,N/A,N/A,N/A") != std::string::npos);
    auto j = nlohmann::json::parse(report::render(report_with(0, 0, 0, 0), report::Format::json));
    CHECK(j["metrics"]["accuracy"].is_null());
}

TEST_CASE("quoted csv fields") {
    auto row = report::parse_csv_row("\"a \"\"b\"\"\",1,2,3,4,5,6,7,N/A,N/A,N/A");
    REQUIRE(row);
    CHECK(row->process == "a \"b\"");
    CHECK_FALSE(report::parse_csv_row("x,1,2"));
    CHECK_FALSE(report::parse_csv_row("x,1,2,3,4,5,6,seven,a,b,c"));
}

TEST_CASE("json report") {
    auto m = bpmn::parse_choreography(chorgate::testing::read_fixture("purchasing.bpmn"));
    auto d = requirements::parse_requirements(chorgate::testing::read_fixture("purchasing.req.json"));
    REQUIRE(m.ok());
    REQUIRE(d.ok());
    auto r = conformance::validate(m.value(), d.value());
    REQUIRE(r.ok());
    const auto text = report::render(r.value(), report::Format::json);
    CHECK(text == report::render(r.value(), report::Format::json));
    auto j = nlohmann::json::parse(text);
    CHECK(j["model"] == "Purchasing");
    CHECK(j["overall"] == "valid");
    CHECK(j["matrix"]["tp"] == 9);
    CHECK(j["metrics"]["recall"]["numerator"] == 9);
    CHECK(j["metrics"]["recall"]["denominator"] == 9);
    CHECK(j["verdicts"].size() == 10);
    CHECK(j["coverage"]["model_paths"] == 12);

    const auto text_form = report::render(r.value(), report::Format::text);
    CHECK(text_form.find("VALID") != std::string::npos);
}

TEST_CASE("format names") {
    CHECK(report::parse_format("json") == report::Format::json);
    CHECK(report::parse_format("csv") == report::Format::csv);
    CHECK(report::parse_format("text") == report::Format::text);
    CHECK_FALSE(report::parse_format("xml"));
    CHECK(report::percent(std::nullopt) == "N/A");
    CHECK(report::percent(conformance::Ratio{1, 2}) == "50%");
}

TEST_CASE("cli exit codes") {
    const auto model = fixture_path("purchasing.bpmn");
    const auto req = fixture_path("purchasing.req.json");

    auto ok = invoke({"validate", model, req});
    CHECK(ok.code == cli::kValid);
    CHECK(ok.out.find("VALID") != std::string::npos);

    auto mutated = invoke({"validate", fixture_path("purchasing_no_payment.bpmn"), req});
    CHECK(mutated.code == cli::kInvalid);

    auto missing = invoke({"validate", "/nonexistent/model.bpmn", req});
    CHECK(missing.code == cli::kInputError);
    CHECK(missing.err.find("/nonexistent/model.bpmn") != std::string::npos);

    auto usage = invoke({"validate", model});
    CHECK(usage.code == cli::kInputError);
    CHECK(usage.err.find("error[Usage]") != std::string::npos);

    CHECK(invoke({"validate", model, req, "--format", "xml"}).code == cli::kInputError);
    CHECK(invoke({"validate", model, req, "--loop-bound", "-1"}).code == cli::kInputError);
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"--version"}).code == 0);
    CHECK(invoke({"frobnicate"}).code == cli::kInputError);

    auto bad_req = invoke({"validate", model, model});
    CHECK(bad_req.code == cli::kInputError);
    CHECK(bad_req.err.find("MalformedDocument") != std::string::npos);
}

TEST_CASE("cli options") {
    const auto model = fixture_path("purchasing_extra_branch.bpmn");
    const auto req = fixture_path("purchasing.req.json");

    auto csv = invoke({"validate", model, req, "--format", "csv"});
    CHECK(csv.code == cli::kInvalid);
    CHECK(csv.out == "Purchasing,5,9,1,9,0,0,1,100%,100%,100%\n");

    CHECK(invoke({"validate", model, req, "--no-coverage"}).code == cli::kValid);

    auto json = invoke({"validate", model, req, "--format", "json", "--loop-bound", "1"});
    auto j = nlohmann::json::parse(json.out);
    CHECK(j["bounds"]["loop_bound"] == 1);

    auto truncated = invoke({"validate", fixture_path("purchasing.bpmn"), req, "--max-traces", "2"});
    CHECK(truncated.code == cli::kInvalid);
    CHECK(truncated.err.find("EnumerationTruncated") != std::string::npos);
}

TEST_CASE("cli format from the environment") {
    ::setenv("CHORGATE_FORMAT", "csv", 1);
    auto r = invoke({"validate", fixture_path("purchasing.bpmn"), fixture_path("purchasing.req.json")});
    ::unsetenv("CHORGATE_FORMAT");
    CHECK(r.code == cli::kValid);
    CHECK(r.out == "Purchasing,5,9,1,9,0,0,1,100%,100%,100%\n");
}

TEST_CASE("cli paths and lint") {
    auto paths = invoke({"paths", fixture_path("purchasing.bpmn"), "--format", "json"});
    CHECK(paths.code == 0);
    auto j = nlohmann::json::parse(paths.out);
    CHECK(j["paths"].size() == 12);

    CHECK(invoke({"lint", fixture_path("purchasing.bpmn"), fixture_path("purchasing.req.json")}).code == 0);
    auto broken = invoke({"lint", fixture_path("purchasing.req.json")});
    CHECK(broken.code != 0);
}
