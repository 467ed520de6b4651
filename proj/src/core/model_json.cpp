#include "chorgate/core/model_json.hpp"

#include <json.hpp>

namespace chorgate {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kOrigin = "core";

NodeKind kind_from_string(const std::string& s) {
    for (auto k : {NodeKind::start_event, NodeKind::end_event, NodeKind::choreography_task,
                   NodeKind::exclusive_gateway, NodeKind::parallel_gateway}) {
        if (s == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown node kind '" + s + "'");
}

}  // namespace

std::string choreography_to_json(const ChoreographyModel& model) {
    json j;
    j["name"] = model.name;
    j["participants"] = model.participants;
    j["nodes"] = json::array();
    for (const auto& n : model.nodes) {
        json jn;
        jn["id"] = n.id;
        jn["kind"] = to_string(n.kind);
        jn["name"] = n.name;
        if (n.is_task()) {
            jn["initiating_link"] = n.initiating_link;
            jn["return_link"] = n.return_link ? json(*n.return_link) : json(nullptr);
            jn["loop"] = n.loop ? json{{"test_before", n.loop->test_before}} : json(nullptr);
        }
        j["nodes"].push_back(std::move(jn));
    }
    j["flows"] = json::array();
    for (const auto& f : model.flows) {
        j["flows"].push_back({{"id", f.id}, {"source", f.source}, {"target", f.target}});
    }
    j["links"] = json::array();
    for (const auto& l : model.links) {
        j["links"].push_back({{"id", l.id},
                              {"message", l.message},
                              {"sender", l.sender},
                              {"receiver", l.receiver},
                              {"sending_activity", l.sending_activity},
                              {"receiving_activity", l.receiving_activity}});
    }
    return j.dump(2);
}

Result<ChoreographyModel> choreography_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        ChoreographyModel m;
        m.name = j.at("name").get<std::string>();
        m.participants = j.at("participants").get<std::vector<std::string>>();
        for (const auto& jn : j.at("nodes")) {
            Node n;
            n.id = jn.at("id").get<std::string>();
            n.kind = kind_from_string(jn.at("kind").get<std::string>());
            n.name = jn.value("name", "");
            if (n.is_task()) {
                n.initiating_link = jn.at("initiating_link").get<std::string>();
                if (jn.contains("return_link") && !jn["return_link"].is_null()) {
                    n.return_link = jn["return_link"].get<std::string>();
                }
                if (jn.contains("loop") && !jn["loop"].is_null()) {
                    n.loop = LoopMarker{jn["loop"].at("test_before").get<bool>()};
                }
            }
            m.nodes.push_back(std::move(n));
        }
        for (const auto& jf : j.at("flows")) {
            m.flows.push_back({jf.at("id").get<std::string>(), jf.at("source").get<std::string>(),
                               jf.at("target").get<std::string>()});
        }
        for (const auto& jl : j.at("links")) {
            m.links.push_back({jl.at("id").get<std::string>(), jl.at("message").get<std::string>(),
                               jl.at("sender").get<std::string>(), jl.at("receiver").get<std::string>(),
                               jl.at("sending_activity").get<std::string>(),
                               jl.at("receiving_activity").get<std::string>()});
        }
        return Result<ChoreographyModel>::success(std::move(m));
    } catch (const std::exception& e) {
        return Result<ChoreographyModel>::failure(
            {make_error(kOrigin, "MalformedDocument", "", e.what())});
    }
}

}  // namespace chorgate
