#pragma once

#include <string>

#include "cramer/measures.hpp"

namespace cramer {

/// Parses a model descriptor {"kind": ..., "dimension": n, "params": {...}}.
/// Throws InputError on malformed or inconsistent descriptors.
MeasureModel parse_model(const std::string& json_text);

/// Reads and parses a descriptor file.
MeasureModel load_model(const std::string& path);

}  // namespace cramer
