#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdcx/evaluation.hpp"
#include "hdcx/theory.hpp"

namespace hdcx {

// Reports keep insertion order so the serialized text is stable.
using Json = nlohmann::ordered_json;

Json to_json(const ExperimentConfig& config);
Json to_json(const Timings& timings);
Json to_json(const ExperimentReport& report);
Json to_json(const theory::TrialReport& report);

// Pretty-printed with a trailing newline.
std::string render(const Json& json);

const char* to_string(RetrainMode mode) noexcept;

}  // namespace hdcx
