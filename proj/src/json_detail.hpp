#pragma once

// Internal glue between the module parsers: shared extended-real and local
// model JSON conversions, implemented in localmodel.cpp.

#include "json.hpp"
#include "uppex/extreal.hpp"
#include "uppex/localmodel.hpp"

namespace uppex {

ExtReal detail_extreal_from_json(const nlohmann::json& j);
nlohmann::json detail_extreal_to_json(ExtReal v);
LocalModel detail_local_model_from_json(const nlohmann::json& j);
nlohmann::json detail_local_model_as_json(const LocalModel& m);

} // namespace uppex
