#pragma once

#include <json.hpp>

#include "malle/brauer.hpp"
#include "malle/config.hpp"
#include "malle/constants.hpp"

namespace malle {

using Json = nlohmann::ordered_json;

Json analyze_json(const Problem& pr);
Json brauer_json(const Problem& pr, const BrauerReport& br);
Json constant_json(const Problem& pr, const LeadingConstantReport& rep,
                   const LeadingConstantReport* naive);

std::string render_table(const Json& j); // human-readable rendering

} // namespace malle
