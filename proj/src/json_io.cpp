#include "qbench/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qb {

namespace {

double finite_or_throw(const json& v) {
  if (!v.is_number()) throw ArgumentError("matrix entry is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ArgumentError("matrix entry is not finite");
  return x;
}

json real_rows(const Mat& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

Dims dims_from(const json& j) {
  if (!j.contains("dims") || !j["dims"].is_array()) throw ArgumentError("missing \"dims\" array");
  Dims d;
  for (const auto& v : j["dims"]) {
    if (!v.is_number_integer() || v.get<int>() <= 0) throw ArgumentError("dims must be positive integers");
    d.push_back(v.get<int>());
  }
  return d;
}

}  // namespace

json matrix_to_json(const Mat& m) { return json{{"re", real_rows(m, false)}, {"im", real_rows(m, true)}}; }

json to_json(const Operator& op) {
  json j = matrix_to_json(op.mat());
  j["dims"] = op.dims();
  return j;
}

json to_json(const PureState& s) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < s.amp().size(); ++i) {
    re.push_back(s.amp()(i).real());
    im.push_back(s.amp()(i).imag());
  }
  return json{{"dims", s.dims()}, {"re", re}, {"im", im}};
}

Mat matrix_from_json(const json& j) {
  if (!j.contains("re") || !j["re"].is_array()) throw ArgumentError("missing \"re\" rows");
  const auto& re = j["re"];
  const Eigen::Index rows = static_cast<Eigen::Index>(re.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(re[0].size()) : 0;
  const bool has_im = j.contains("im");
  if (has_im && (!j["im"].is_array() || j["im"].size() != re.size()))
    throw ArgumentError("\"im\" rows do not match \"re\"");
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!re[i].is_array() || static_cast<Eigen::Index>(re[i].size()) != cols)
      throw ArgumentError("ragged \"re\" row");
    if (has_im && j["im"][i].size() != re[i].size()) throw ArgumentError("ragged \"im\" row");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = cplx(finite_or_throw(re[i][k]), has_im ? finite_or_throw(j["im"][i][k]) : 0.0);
  }
  return m;
}

Operator operator_from_json(const json& j) { return Operator(dims_from(j), matrix_from_json(j)); }

PureState pure_state_from_json(const json& j) {
  Dims d = dims_from(j);
  if (!j.contains("re") || !j["re"].is_array()) throw ArgumentError("missing \"re\" amplitudes");
  const auto& re = j["re"];
  Vec v(static_cast<Eigen::Index>(re.size()));
  for (size_t i = 0; i < re.size(); ++i) {
    const double im = j.contains("im") ? finite_or_throw(j["im"].at(i)) : 0.0;
    v(static_cast<Eigen::Index>(i)) = cplx(finite_or_throw(re[i]), im);
  }
  return PureState(std::move(d), std::move(v));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
}

}  // namespace qb
