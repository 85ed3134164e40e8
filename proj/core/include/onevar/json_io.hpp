#pragma once

#include <nlohmann/json.hpp>

#include "onevar/formula.hpp"
#include "onevar/kripke.hpp"
#include "onevar/lemma.hpp"

namespace onevar {

/// Malformed or inconsistent JSON input.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// {"worlds": N, "edges": [[a,b],...], "labels": {"v0": 3, ...}}; labels omitted when empty.
nlohmann::json to_json(const Frame1& frame);
Frame1 frame_from_json(const nlohmann::json& j);

/// {"factors": [frame,...], "valuation": {"p1": [[c1,...,cn],...],...}, "point": [c1,...,cn]}.
/// The reserved variable is keyed "p". Empty extensions are omitted.
nlohmann::json to_json(const ProductModel& model);
ProductModel product_model_from_json(const nlohmann::json& j);

/// "p" -> 0, "p3" -> 3.
std::string variable_name(std::uint32_t index);
std::uint32_t variable_index(std::string_view name);

nlohmann::json coords_json(const NFrame& frame, World w);

nlohmann::json to_json(const StarReport& report);
nlohmann::json to_json(const BExactReport& report);
nlohmann::json to_json(const PreservationReport& report, const FormulaStore& store);
nlohmann::json to_json(const SublemmaReport& report, const NFrame& frame);

}  // namespace onevar
