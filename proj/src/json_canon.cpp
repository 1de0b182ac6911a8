#include "arena/json_canon.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "arena/error.hpp"
#include "fmt/format.h"

namespace arena {
namespace {

void dump_value(const json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        dump_value(item, indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      std::string s = fmt::format("{:.4f}", d);
      if (s == "-0.0000") s = "0.0000";
      out += s;
      return;
    }
    default:
      out += v.dump(-1, ' ', false, json::error_handler_t::replace);
  }
}

}  // namespace

std::string canonical_dump(const json& doc) {
  std::string out;
  dump_value(doc, 0, out);
  out += "\n";
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
}

json extract_json_object(const std::string& text) {
  for (std::size_t start = text.find('{'); start != std::string::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
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
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) {
          auto parsed = json::parse(text.substr(start, i - start + 1), nullptr,
                                    /*allow_exceptions=*/false);
          if (!parsed.is_discarded() && parsed.is_object()) return parsed;
          break;
        }
      }
    }
  }
  throw Error(ErrorCode::kMalformedJson, "no JSON object found in text");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
  return parse_json(read_text_file(path));
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed " + path.string());
}

}  // namespace arena
