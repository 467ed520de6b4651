#pragma once

#include <string>
#include <string_view>

#include "chorgate/core/choreography.hpp"

namespace chorgate {

/// Lossless JSON form of a choreography model (stable key order).
std::string choreography_to_json(const ChoreographyModel& model);

/// Reads the form produced by choreography_to_json. Structural validity is not
/// checked here; run validate_choreography on the result.
Result<ChoreographyModel> choreography_from_json(std::string_view text);

}  // namespace chorgate
