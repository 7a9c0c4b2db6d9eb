#pragma once
#include <json.hpp>

#include "csrap/config.hpp"

namespace csrap {

// JSON bindings for the config structs; missing keys keep defaults, unknown
// keys are ignored.
void from_json_into(const nlohmann::json& j, HorizonConfig& c);
void from_json_into(const nlohmann::json& j, ResourceModel& m);
void from_json_into(const nlohmann::json& j, ResizePolicy& p);

}  // namespace csrap
