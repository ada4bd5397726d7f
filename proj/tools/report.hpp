#pragma once

#include "nuq/analysis.hpp"

#include <json.hpp>

#include <string>

namespace nuqcli {

using json = nlohmann::json;

inline constexpr const char* kEngineVersion = "nuq-engine 3";

json int_json(const nuq::Int& v);
json group_json(const nuq::FgAbGroup& g);

// Everything in the report is a function of the diagram content and the options, so it can be cached.
json build_report(const nuq::Analysis& a);

std::string render_text(const std::string& file, const json& report);
std::string render_machine(const std::string& file, const json& report);

}  // namespace nuqcli
