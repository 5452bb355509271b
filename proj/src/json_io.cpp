#include "ncsim/json_io.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "ncsim/errors.hpp"

namespace ncsim {

json to_json(const ModelParams& params) {
  return json{{"N", params.N}, {"p", params.p}, {"q", params.q}, {"r", params.r}};
}

json to_json(const Coefficients& c) {
  return json{{"alpha1", c.alpha1}, {"alpha2", c.alpha2}, {"alpha", c.alpha},
              {"beta1", c.beta1},   {"beta2", c.beta2},   {"beta", c.beta}};
}

ModelParams params_from_json(const json& j) {
  if (!j.is_object()) throw InvalidParams("params config must be a JSON object");
  for (const char* key : {"N", "p", "q", "r"}) {
    if (!j.contains(key)) throw InvalidParams(std::string("params config missing key \"") + key + "\"");
  }
  if (!j["N"].is_number_integer()) throw InvalidParams("\"N\" must be an integer");
  for (const char* key : {"p", "q", "r"}) {
    if (!j[key].is_number()) throw InvalidParams(std::string("\"") + key + "\" must be a number");
  }
  ModelParams params;
  params.N = j["N"].get<int>();
  params.p = j["p"].get<double>();
  params.q = j["q"].get<double>();
  params.r = j["r"].get<double>();
  return params;
}

json snapshot_to_json(const GraphState& state) {
  json j;
  j["step"] = state.step();
  j["params"] = to_json(state.params());

  json vertices = json::array();
  for (const VertexRecord& v : state.vertices()) {
    vertices.push_back({{"label", v.label},
                        {"weight", v.weight},
                        {"degree", v.degree},
                        {"birth_step", v.birth_step}});
  }
  j["vertices"] = std::move(vertices);

  std::vector<std::array<VertexLabel, 2>> edges;
  for (const VertexRecord& v : state.vertices()) {
    for (VertexLabel nb : state.neighbors(v.label)) {
      if (v.label < nb) edges.push_back({v.label, nb});
    }
  }
  std::sort(edges.begin(), edges.end());
  json edge_list = json::array();
  for (const auto& e : edges) edge_list.push_back({e[0], e[1]});
  j["edges"] = std::move(edge_list);

  auto registry_json = [](const CliqueRegistry& reg) {
    std::vector<std::pair<std::vector<VertexLabel>, std::uint64_t>> entries;
    entries.reserve(reg.entry_count());
    for (std::size_t s = 0; s < reg.entry_count(); ++s) {
      auto key = reg.key_at(s);
      entries.emplace_back(std::vector<VertexLabel>(key.begin(), key.end()), reg.weight_at(s));
    }
    std::sort(entries.begin(), entries.end());
    json out = json::array();
    for (const auto& [key, weight] : entries) {
      out.push_back({{"key", key}, {"weight", weight}});
    }
    return out;
  };
  j["cliques_N"] = registry_json(state.full_registry());
  j["cliques_N1"] = registry_json(state.sub_registry());
  return j;
}

GraphState snapshot_from_json(const json& j) {
  const ModelParams params = params_from_json(j.at("params"));

  std::vector<VertexRecord> vertices;
  for (const auto& v : j.at("vertices")) {
    vertices.push_back({v.at("label").get<VertexLabel>(), v.at("weight").get<std::int64_t>(),
                        v.at("degree").get<std::int64_t>(), v.at("birth_step").get<std::int64_t>()});
  }
  std::vector<std::array<VertexLabel, 2>> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at(0).get<VertexLabel>(), e.at(1).get<VertexLabel>()});
  }
  auto registry_entries = [](const json& arr) {
    std::vector<std::pair<std::vector<VertexLabel>, std::uint64_t>> out;
    for (const auto& entry : arr) {
      out.emplace_back(entry.at("key").get<std::vector<VertexLabel>>(),
                       entry.at("weight").get<std::uint64_t>());
    }
    return out;
  };
  return snapshot_restore(params, j.at("step").get<std::int64_t>(), std::move(vertices), edges,
                          registry_entries(j.at("cliques_N")), registry_entries(j.at("cliques_N1")));
}

json checkpoint_to_json(const TrajectoryRecord& trajectory, const CheckpointRow& row) {
  json tracked = json::object();
  for (std::size_t i = 0; i < trajectory.tracked_labels.size(); ++i) {
    tracked[std::to_string(trajectory.tracked_labels[i])] = {
        {"W", row.tracked_weight[i]}, {"D", row.tracked_degree[i]}};
  }
  return json{{"n", row.n},
              {"V", row.vertex_count},
              {"maxW", row.max_weight},
              {"maxD", row.max_degree},
              {"tracked", std::move(tracked)}};
}

}  // namespace ncsim
