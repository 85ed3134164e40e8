#include "onevar/json_io.hpp"

#include <charconv>

#include "onevar/syntax.hpp"

namespace onevar {

using nlohmann::json;

std::string variable_name(std::uint32_t index) {
  return index == kReservedVar ? std::string("p") : "p" + std::to_string(index);
}

std::uint32_t variable_index(std::string_view name) {
  if (name.empty() || name.front() != 'p') throw FormatError("bad variable name '" + std::string(name) + "'");
  if (name.size() == 1) return kReservedVar;
  std::uint32_t index = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
  if (ec != std::errc{} || ptr != name.data() + name.size() || index == 0)
    throw FormatError("bad variable name '" + std::string(name) + "'");
  return index;
}

json to_json(const Frame1& frame) {
  json edges = json::array();
  for (const auto& [a, b] : frame.relation.edges()) edges.push_back({a, b});
  json j{{"worlds", frame.world_count()}, {"edges", std::move(edges)}};
  if (!frame.labels.empty()) j["labels"] = frame.labels;
  return j;
}

Frame1 frame_from_json(const json& j) {
  try {
    const auto worlds = j.at("worlds").get<std::size_t>();
    if (worlds == 0) throw FormatError("frame must have at least one world");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("edge must be a pair");
      edges.emplace_back(e[0].get<World>(), e[1].get<World>());
    }
    Frame1 frame{Relation(worlds, std::move(edges)), {}};
    if (j.contains("labels")) {
      for (const auto& [name, w] : j.at("labels").items()) {
        const auto world = w.get<World>();
        if (world >= worlds) throw FormatError("label '" + name + "' points outside the frame");
        frame.labels[name] = world;
      }
    }
    return frame;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed frame: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("malformed frame: ") + e.what());
  }
}

json coords_json(const NFrame& frame, World w) { return frame.coords_of(w); }

json to_json(const ProductModel& model) {
  json factors = json::array();
  for (const auto& f : model.factors) factors.push_back(to_json(f));
  json valuation = json::object();
  for (const auto& [var, ext] : model.valuation.entries()) {
    if (ext.empty()) continue;
    json points = json::array();
    ext.for_each([&](World w) { points.push_back(coords_json(model.product, w)); });
    valuation[variable_name(var)] = std::move(points);
  }
  return json{{"factors", std::move(factors)},
              {"valuation", std::move(valuation)},
              {"point", coords_json(model.product, model.point)}};
}

ProductModel product_model_from_json(const json& j) {
  try {
    std::vector<Frame1> factors;
    for (const auto& f : j.at("factors")) factors.push_back(frame_from_json(f));
    if (factors.empty()) throw FormatError("product model needs at least one factor");
    const NFrame frame = product(factors);

    auto world_of = [&](const json& coords) {
      if (!coords.is_array()) throw FormatError("coordinates must be an array");
      const auto c = coords.get<std::vector<World>>();
      try {
        return frame.world_at(c);
      } catch (const std::exception& e) {
        throw FormatError(std::string("bad coordinates: ") + e.what());
      }
    };

    Valuation valuation;
    if (j.contains("valuation")) {
      for (const auto& [name, points] : j.at("valuation").items()) {
        WorldSet ext(frame.world_count());
        for (const auto& c : points) ext.insert(world_of(c));
        valuation.set(variable_index(name), std::move(ext));
      }
    }
    const World point = world_of(j.at("point"));
    return ProductModel::make(std::move(factors), std::move(valuation), point);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed product model: ") + e.what());
  }
}

json to_json(const StarReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"base_world", v.base_world}, {"k", v.k}, {"beta", v.beta_holds}, {"variable", v.variable_holds}});
  return {{"ok", report.ok()}, {"checked", report.checked}, {"violations", std::move(violations)}};
}

json to_json(const BExactReport& report) {
  json extras = json::array();
  for (const auto& [w, label] : report.extras) extras.push_back({{"world", w}, {"label", label}});
  return {{"ok", report.ok()}, {"missing", report.missing}, {"extras", std::move(extras)}};
}

json to_json(const PreservationReport& report, const FormulaStore& store) {
  json violations = json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"subformula", render(store, v.subformula)}, {"base_world", v.base_world}});
  return {{"ok", report.ok()}, {"checked", report.checked}, {"violations", std::move(violations)}};
}

json to_json(const SublemmaReport& report, const NFrame& frame) {
  json violations = json::array();
  for (World y : report.violations) violations.push_back(coords_json(frame, y));
  json witnesses = json::array();
  for (const auto& w : report.witnesses) {
    json entry{{"y", coords_json(frame, w.y)}, {"x", coords_json(frame, w.x)}};
    entry["z"] = w.z ? coords_json(frame, *w.z) : json(nullptr);
    witnesses.push_back(std::move(entry));
  }
  json j{{"ok", report.ok()}, {"checked", report.checked}, {"violations", std::move(violations)}};
  if (!report.witnesses.empty()) j["witnesses"] = std::move(witnesses);
  return j;
}

}  // namespace onevar
