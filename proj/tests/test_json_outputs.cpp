#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "statecoder/bounds.hpp"
#include "statecoder/channel.hpp"
#include "statecoder/gaussian.hpp"
#include "statecoder/optimize.hpp"
#include "statecoder/sim.hpp"

using namespace statecoder;
using nlohmann::json;

namespace {

// minimal structural validator: required keys, property types and
// additionalProperties type maps, which is all the shipped schemas use
bool validate(const json& schema, const json& value);

bool type_matches(const std::string& type, const json& v) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "number") return v.is_number();
    if (type == "integer") return v.is_number_integer();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    return true;
}

bool validate(const json& schema, const json& value) {
    if (schema.contains("type") && !type_matches(schema["type"].get<std::string>(), value))
        return false;
    if (schema.contains("required"))
        for (const auto& key : schema["required"])
            if (!value.contains(key.get<std::string>())) return false;
    if (schema.contains("properties") && value.is_object())
        for (auto& [key, sub] : schema["properties"].items())
            if (value.contains(key) && !validate(sub, value[key])) return false;
    if (schema.contains("additionalProperties") && schema["additionalProperties"].is_object() &&
        value.is_object()) {
        const json& props =
            schema.contains("properties") ? schema["properties"] : json::object();
        for (auto& [key, sub] : value.items())
            if (!props.contains(key) && !validate(schema["additionalProperties"], sub))
                return false;
    }
    if (schema.contains("minimum") && value.is_number() &&
        value.get<double>() < schema["minimum"].get<double>())
        return false;
    return true;
}

json load_schema(const std::string& name) {
    std::ifstream in(std::string(STATECODER_SOURCE_DIR) + "/share/schemas/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

}  // namespace

TEST_CASE("json outputs validate against the shipped schemas") {
    StateChannel ch = example_channel();
    json channel_schema = load_schema("channel.schema.json");
    CHECK(validate(channel_schema, json::parse(channel_to_json_text(ch))));

    std::vector<double> uniform = {0.5, 0.5, 0.5, 0.5};
    AuxScheme aux = outputs_as_aux(ch, uniform);
    json report_schema = load_schema("rate_report.schema.json");
    CHECK(validate(report_schema, json::parse(superposition_rate(ch, aux).to_json_text())));
    CHECK(validate(report_schema,
                   json::parse(gp_rate(ch, exact_example::witness()).to_json_text())));

    json aux_schema = load_schema("aux_scheme.schema.json");
    CHECK(validate(aux_schema, json::parse(aux_to_json_text(aux))));
    CHECK(validate(aux_schema, json::parse(gp_aux_to_json_text(exact_example::witness()))));

    SimConfig cfg;
    cfg.n = 8;
    cfg.R = 0.3;
    cfg.T1 = cfg.T2 = 0.3;
    cfg.trials = 10;
    cfg.seed = 3;
    json sim_schema = load_schema("sim_result.schema.json");
    CHECK(validate(sim_schema, json::parse(run_trials(ch, aux, cfg).to_json_text())));

    // a deliberately broken document fails
    CHECK_FALSE(validate(report_schema, json::parse(R"({"overall": "zero"})")));
}

TEST_CASE("csv header is stable") {
    CHECK(SimResult::csv_header() == "n,R,T0,T1,T2,epsilon,trials,enc_fail,err1,err2,err_overall");
}
