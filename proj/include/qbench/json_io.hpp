#pragma once

#include <json.hpp>
#include <string>

#include "qbench/tensor.hpp"

namespace qb {

using json = nlohmann::json;

json to_json(const Operator& op);
json to_json(const PureState& s);
json matrix_to_json(const Mat& m);

Operator operator_from_json(const json& j);
PureState pure_state_from_json(const json& j);
Mat matrix_from_json(const json& j);

// Parse a file; errors carry the file name and the parser's line/column.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qb
