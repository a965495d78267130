#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "mnulink/numerology.hpp"
#include "mnulink/receiver.hpp"

namespace mnulink {

struct ScenarioParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the JSON scenario document. Required sections: ues, channel,
/// noise, power. Schema violations raise ScenarioParseError naming the field;
/// structural numerology problems are left to validate_scenario.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario(const std::string& path);

/// Deterministic number formatting shared by all CSV emitters.
std::string csv_num(double v);

/// Profile CSV schema: kind,victim,subcarrier_index,power_linear,power_db.
void write_profiles_csv(std::ostream& os, const std::vector<IniProfile>& profiles);

double to_db(double linear);

}  // namespace mnulink
