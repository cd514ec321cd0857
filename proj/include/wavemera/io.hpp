// Copyright 2026 The wavemera Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "wavemera/dwt.hpp"
#include "wavemera/error.hpp"
#include "wavemera/filters.hpp"
#include "wavemera/sequence.hpp"

#ifndef WAVEMERA_VERSION_STRING
#define WAVEMERA_VERSION_STRING "0.0.0"
#endif

namespace wavemera {

inline constexpr const char* kVersion = WAVEMERA_VERSION_STRING;
inline constexpr const char* kStoreEnv = "WAVEMERA_STORE";

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------
// Files

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// CSV

/// CSV with a '#' provenance line, a header row, '.' decimals and '\n'
/// line endings.
class CsvWriter {
 public:
  CsvWriter(const std::string& provenance, std::vector<std::string> header) : columns_(header.size()) {
    out_ << "# " << provenance << '\n';
    write_row(header);
  }

  CsvWriter& row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw PreconditionError("CsvWriter: row width does not match header");
    write_row(cells);
    return *this;
  }

  std::string str() const { return out_.str(); }

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }

 private:
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  std::size_t columns_;
  std::ostringstream out_;
};

// ---------------------------------------------------------------------------
// JSON encodings

inline json to_json(const ModeSeq& m) {
  json j;
  j["offset"] = m.offset;
  json re = json::array(), im = json::array();
  for (const auto& v : m.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["values"] = re;
  if (m.max_imag() != 0.0) j["imag"] = im;
  return j;
}

inline ModeSeq mode_from_json(const json& j) {
  ModeSeq m;
  m.offset = j.at("offset").get<std::int64_t>();
  const auto& re = j.at("values");
  m.values.resize(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) m.values[i] = re[i].get<double>();
  if (j.contains("imag")) {
    const auto& im = j.at("imag");
    if (im.size() != re.size()) throw IoError("mode: imag length mismatch");
    for (std::size_t i = 0; i < im.size(); ++i) m.values[i].imag(im[i].get<double>());
  }
  return m;
}

inline json to_json(const FilterPair& p) {
  json j;
  j["K"] = p.K;
  j["L"] = p.L;
  j["M"] = p.M;
  j["h_s"] = to_json(p.h_s);
  j["g_s"] = to_json(p.g_s);
  j["h_w"] = to_json(p.h_w);
  j["g_w"] = to_json(p.g_w);
  j["epsilon"] = p.epsilon;
  j["B"] = p.B;
  j["generator"] = p.generator;
  return j;
}

inline FilterPair pair_from_json(const json& j) {
  try {
    FilterPair p;
    p.K = j.at("K").get<int>();
    p.L = j.at("L").get<int>();
    p.M = j.at("M").get<int>();
    p.h_s = mode_from_json(j.at("h_s"));
    p.g_s = mode_from_json(j.at("g_s"));
    p.h_w = mode_from_json(j.at("h_w"));
    p.g_w = mode_from_json(j.at("g_w"));
    p.epsilon = j.at("epsilon").get<double>();
    p.B = j.at("B").get<double>();
    p.generator = j.at("generator").get<std::string>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed filter record: ") + e.what());
  }
}

inline json to_json(const CircuitSpec& c) {
  json j;
  j["depth"] = c.depth;
  json layers = json::array();
  for (const auto& l : c.layers) {
    json g = json::array();
    for (const auto& r : l.gate) g.push_back(json::array({r[0], r[1]}));
    layers.push_back({{"parity", to_string(l.parity)}, {"gate", g}});
  }
  j["layers"] = layers;
  j["phase_stage"] = c.phase_stage;
  j["scaling_shift"] = c.scaling_shift;
  j["wavelet_shift"] = c.wavelet_shift;
  return j;
}

// ---------------------------------------------------------------------------
// Filter store

inline std::string store_filename(int K, int L) {
  return "selesnick_K" + std::to_string(K) + "_L" + std::to_string(L) + ".json";
}

/// Store directory from the environment, if set and non-empty.
inline std::optional<std::filesystem::path> store_directory() {
  const char* v = std::getenv(kStoreEnv);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::filesystem::path(v);
}

/// Looks the pair up in `dir` and designs (and stores) it on a miss.
/// Records whose generator tag differs from the current one are redesigned.
inline FilterPair load_or_design(int K, int L, const std::optional<std::filesystem::path>& dir,
                                 bool use_cache = true) {
  if (!dir) return design_pair(K, L);
  const auto path = *dir / store_filename(K, L);
  if (use_cache && std::filesystem::exists(path)) {
    json j;
    try {
      j = json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError("cannot parse " + path.string() + ": " + e.what());
    }
    FilterPair p = pair_from_json(j);
    if (p.K == K && p.L == L && p.generator == kGeneratorTag) return p;
  }
  FilterPair p = design_pair(K, L);
  write_file_atomic(path, to_json(p).dump(2) + "\n");
  return p;
}

}  // namespace wavemera
