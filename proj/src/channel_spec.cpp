// Copyright 2026 The qbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbound/channel_spec.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbound/error.hpp"

namespace qbound {

namespace {

using nlohmann::json;

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double ParseNumber(const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size()) {
    throw Error(ErrorCode::kInvalidInput, "cannot parse number '" + tok + "' in channel spec");
  }
  return v;
}

// "kind" or "kind:p1,p2,...".
void SplitInline(const std::string& text, std::string& kind, std::vector<double>& params) {
  const auto colon = text.find(':');
  kind = Trim(text.substr(0, colon));
  params.clear();
  if (colon == std::string::npos) return;
  std::stringstream ss(text.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) params.push_back(ParseNumber(Trim(tok)));
}

// JSON text, file contents, or empty when `text` is an inline spec.
std::string ResolveJson(std::string_view text) {
  const std::string t = Trim(text);
  if (!t.empty() && t.front() == '{') return t;
  std::error_code ec;
  if (t.find(':') == std::string::npos || std::filesystem::exists(t, ec)) {
    if (std::filesystem::is_regular_file(t, ec)) {
      std::ifstream in(t);
      if (!in) throw Error(ErrorCode::kInvalidInput, "cannot open channel spec file " + t);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }
  }
  return {};
}

json ParseJson(std::string_view text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "channel spec JSON must be an object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed channel spec JSON: ") + e.what());
  }
}

std::vector<double> Params(const json& j) {
  std::vector<double> params;
  if (!j.contains("params")) return params;
  if (!j["params"].is_array()) throw Error(ErrorCode::kInvalidInput, "\"params\" must be an array");
  for (const auto& v : j["params"]) {
    if (!v.is_number()) throw Error(ErrorCode::kInvalidInput, "\"params\" entries must be numbers");
    params.push_back(v.get<double>());
  }
  return params;
}

Complex Entry(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw Error(ErrorCode::kInvalidInput, "Kraus entries must be numbers or [re, im] pairs");
}

bool IsEntry(const json& v) {
  return v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number());
}

std::size_t DimField(const json& j, const char* key) {
  if (!j.contains(key)) return 0;
  if (!j[key].is_number_integer() || j[key].get<long long>() <= 0) {
    throw Error(ErrorCode::kInvalidInput, std::string("\"") + key + "\" must be a positive integer");
  }
  return j[key].get<std::size_t>();
}

ComplexMatrix KrausMatrix(const json& k, std::size_t d_in, std::size_t d_out) {
  if (!k.is_array() || k.empty()) throw Error(ErrorCode::kInvalidInput, "each Kraus operator must be a nonempty array");
  // Flat only when the dimensions are given and the length matches; otherwise rows.
  bool flat = d_in != 0 && d_out != 0 && k.size() == d_in * d_out;
  for (const auto& v : k) flat = flat && IsEntry(v);
  if (!flat && k[0].is_array()) {
    const std::size_t rows = k.size(), cols = k[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!k[r].is_array() || k[r].size() != cols) throw Error(ErrorCode::kShapeError, "ragged Kraus rows");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = Entry(k[r][c]);
    }
    return m;
  }
  if (d_in == 0 || d_out == 0) {
    throw Error(ErrorCode::kInvalidInput, "flat Kraus lists need \"d_in\" and \"d_out\"");
  }
  if (k.size() != d_in * d_out) throw Error(ErrorCode::kShapeError, "flat Kraus list has the wrong length");
  ComplexMatrix m(d_out, d_in);
  for (std::size_t r = 0; r < d_out; ++r) {
    for (std::size_t c = 0; c < d_in; ++c) m(r, c) = Entry(k[r * d_in + c]);
  }
  return m;
}

KrausChannel ChannelFromObject(const json& j) {
  std::size_t d_in = DimField(j, "d_in");
  std::size_t d_out = DimField(j, "d_out");
  if (j.contains("kraus")) {
    const json& ks = j["kraus"];
    if (!ks.is_array() || ks.empty()) throw Error(ErrorCode::kInvalidInput, "\"kraus\" must be a nonempty array");
    std::vector<ComplexMatrix> kraus;
    for (const auto& k : ks) kraus.push_back(KrausMatrix(k, d_in, d_out));
    const auto rows = static_cast<std::size_t>(kraus[0].rows());
    const auto cols = static_cast<std::size_t>(kraus[0].cols());
    if ((d_in && d_in != cols) || (d_out && d_out != rows)) {
      throw Error(ErrorCode::kShapeError, "Kraus shape disagrees with d_in / d_out");
    }
    return KrausChannel(cols, rows, std::move(kraus));
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw Error(ErrorCode::kInvalidInput, "channel spec needs \"kind\" or \"kraus\"");
  }
  const std::vector<double> params = Params(j);
  KrausChannel ch = BuiltinChannel(j["kind"].get<std::string>(), params);
  if ((d_in && d_in != ch.d_in()) || (d_out && d_out != ch.d_out())) {
    throw Error(ErrorCode::kShapeError, "d_in / d_out disagree with the builtin channel");
  }
  return ch;
}

ChannelFamily FamilyFromObject(const json& j) {
  if (j.contains("kraus")) {
    throw Error(ErrorCode::kInvalidInput, "families need a builtin \"kind\" (derivatives are analytic)");
  }
  if (!j.contains("kind") || !j["kind"].is_string()) throw Error(ErrorCode::kInvalidInput, "family spec needs \"kind\"");
  ChannelFamily fam = BuiltinFamily(j["kind"].get<std::string>(), Params(j));
  if (j.contains("theta_domain")) {
    const json& d = j["theta_domain"];
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number()) {
      throw Error(ErrorCode::kInvalidInput, "\"theta_domain\" must be [lo, hi]");
    }
    fam = fam.WithDomain(d[0].get<double>(), d[1].get<double>());
  }
  return fam;
}

}  // namespace

KrausChannel ChannelFromJson(std::string_view json_text) { return ChannelFromObject(ParseJson(json_text)); }

ChannelFamily FamilyFromJson(std::string_view json_text) { return FamilyFromObject(ParseJson(json_text)); }

KrausChannel ParseChannelSpec(std::string_view text) {
  const std::string js = ResolveJson(text);
  if (!js.empty()) return ChannelFromJson(js);
  std::string kind;
  std::vector<double> params;
  SplitInline(Trim(text), kind, params);
  if (kind.empty()) throw Error(ErrorCode::kInvalidInput, "empty channel spec");
  return BuiltinChannel(kind, params);
}

ChannelFamily ParseFamilySpec(std::string_view text) {
  const std::string js = ResolveJson(text);
  if (!js.empty()) return FamilyFromJson(js);
  std::string kind;
  std::vector<double> params;
  SplitInline(Trim(text), kind, params);
  if (kind.empty()) throw Error(ErrorCode::kInvalidInput, "empty family spec");
  return BuiltinFamily(kind, params);
}

std::string ChannelToJson(const KrausChannel& ch) {
  json ks = json::array();
  for (const auto& k : ch.kraus()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(r, c).real(), k(r, c).imag()});
      rows.push_back(row);
    }
    ks.push_back(rows);
  }
  json j;
  j["d_in"] = ch.d_in();
  j["d_out"] = ch.d_out();
  j["kraus"] = ks;
  return j.dump();
}

}  // namespace qbound
