// Copyright 2026 The sgnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgnav/structured.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "sgnav/errors.hpp"

namespace sgnav {

namespace {

using ojson = nlohmann::ordered_json;

std::string lower_trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// End index (inclusive) of the bracketed value starting at `open`, skipping
// string contents; npos when unbalanced.
std::size_t match_close(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      ++depth;
    } else if (c == '}' || c == ']') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

const ojson& require_object(const std::optional<ojson>& j) {
  if (!j) throw ParseError("no structured value found in response");
  if (!j->is_object()) throw ParseError("expected a JSON object");
  return *j;
}

std::string require_string(const ojson& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  if (!it->is_string()) throw ParseError(std::string("field \"") + key + "\" is not a string");
  return it->get<std::string>();
}

void write_number(std::ostream& os, double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    os << static_cast<long long>(v);
  } else {
    os << ojson(v).dump();
  }
}

void write_inline(std::ostream& os, const ojson& v) {
  switch (v.type()) {
    case ojson::value_t::object: {
      os << '{';
      bool first = true;
      for (const auto& [k, item] : v.items()) {
        if (!first) os << ", ";
        first = false;
        os << ojson(k).dump() << ": ";
        write_inline(os, item);
      }
      os << '}';
      break;
    }
    case ojson::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        write_inline(os, v[i]);
      }
      os << ']';
      break;
    }
    case ojson::value_t::number_float:
      write_number(os, v.get<double>());
      break;
    default:
      os << v.dump();
  }
}

}  // namespace

std::string normalize_relation(std::string_view label) {
  const std::string l = lower_trim(label);
  for (const std::string& r : relation_vocabulary()) {
    if (l == r) return r;
  }
  return std::string(kCatchAllRelation);
}

std::optional<ojson> extract_json(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{' && text[i] != '[') continue;
    const std::size_t end = match_close(text, i);
    if (end == std::string_view::npos) continue;
    ojson parsed = ojson::parse(text.substr(i, end - i + 1), nullptr,
                                /*allow_exceptions=*/false);
    if (!parsed.is_discarded()) return parsed;
  }
  return std::nullopt;
}

RelationList parse_relations(std::string_view response) {
  const auto j = extract_json(response);
  if (!j) throw ParseError("no structured value found in response");
  if (!j->is_array()) throw ParseError("expected a JSON array of relationships");
  RelationList out;
  for (const ojson& item : *j) {
    if (!item.is_object()) throw ParseError("relationship entry is not an object");
    out.push_back(require_string(item, "relationships"));
  }
  return out;
}

DistanceReason parse_distance(std::string_view response) {
  const auto parsed = extract_json(response);
  const ojson& obj = require_object(parsed);
  const auto it = obj.find("distance");
  if (it == obj.end()) throw ParseError("missing field \"distance\"");
  if (!it->is_number()) throw ParseError("field \"distance\" is not a number");
  DistanceReason out;
  out.distance = it->get<double>();
  out.reason = require_string(obj, "reason");
  return out;
}

Question parse_question(std::string_view response) {
  return {require_string(require_object(extract_json(response)), "question")};
}

Answer parse_answer(std::string_view response) {
  return {require_string(require_object(extract_json(response)), "answer")};
}

StructuredValue parse_structured(std::string_view response, ResponseShape shape) {
  switch (shape) {
    case ResponseShape::kRelationArray: return parse_relations(response);
    case ResponseShape::kDistanceReason: return parse_distance(response);
    case ResponseShape::kQuestion: return parse_question(response);
    case ResponseShape::kAnswer: return parse_answer(response);
  }
  throw ParseError("unknown response shape");
}

std::string to_inline_json(const ojson& value) {
  std::ostringstream os;
  write_inline(os, value);
  return os.str();
}

std::string render(const StructuredValue& value) {
  struct Visitor {
    ojson operator()(const RelationList& rels) const {
      ojson arr = ojson::array();
      for (const std::string& r : rels) arr.push_back({{"relationships", r}});
      return arr;
    }
    ojson operator()(const DistanceReason& d) const {
      ojson o;
      o["distance"] = d.distance;
      o["reason"] = d.reason;
      return o;
    }
    ojson operator()(const Question& q) const { return {{"question", q.question}}; }
    ojson operator()(const Answer& a) const { return {{"answer", a.answer}}; }
  };
  return to_inline_json(std::visit(Visitor{}, value));
}

}  // namespace sgnav
