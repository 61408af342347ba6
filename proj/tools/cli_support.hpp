#pragma once

// Config parsing and output formatting for the gkdv command-line tool.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkdv/gkdv.hpp"

namespace gkdv::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, verify_failed = 1, bad_input = 2, construction_failed = 3, runtime_failed = 4 };

/// Strict view of a JSON object: rejects keys outside the schema.
class Section {
 public:
  Section(const Json& j, std::string path, std::initializer_list<const char*> keys) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidArgument(where() + " must be a JSON object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) throw InvalidArgument("unknown key '" + it.key() + "' in " + where());
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const Json& raw(const char* key) const { return j_.at(key); }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw InvalidArgument("missing required key '" + std::string(key) + "' in " + where());
    }
    const auto& v = j_.at(key);
    if (!v.is_number()) throw InvalidArgument(where(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InvalidArgument(where(key) + " must be finite");
    return d;
  }

  int integer(const char* key, std::optional<int> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw InvalidArgument("missing required key '" + std::string(key) + "' in " + where());
    }
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) throw InvalidArgument(where(key) + " must be an integer");
    return v.get<int>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw InvalidArgument(where(key) + " must be true or false");
    return j_.at(key).get<bool>();
  }

  std::optional<bool> optional_boolean(const char* key) const {
    if (!has(key)) return std::nullopt;
    return boolean(key, false);
  }

  std::string text(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw InvalidArgument("missing required key '" + std::string(key) + "' in " + where());
    }
    if (!j_.at(key).is_string()) throw InvalidArgument(where(key) + " must be a string");
    return j_.at(key).get<std::string>();
  }

  std::vector<double> numbers(const char* key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    if (!j_.at(key).is_array()) throw InvalidArgument(where(key) + " must be an array of numbers");
    for (const auto& v : j_.at(key)) {
      if (!v.is_number()) throw InvalidArgument(where(key) + " must be an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  Section child(const char* key, std::initializer_list<const char*> keys) const {
    if (!has(key)) throw InvalidArgument("missing required section '" + std::string(key) + "' in " + where());
    return Section(j_.at(key), path_ + "." + key, keys);
  }

  std::string where(const char* key = nullptr) const {
    return key ? "'" + path_ + "." + key + "'" : "'" + path_ + "'";
  }

 private:
  const Json& j_;
  std::string path_;
};

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("config '" + path + "' is not valid JSON: " + e.what());
  }
}

inline PhysicalParams parse_params(const Section& s) {
  return PhysicalParams(s.number("h"), s.number("g", 1.0), s.number("rho", 1.0), s.number("sigma", 0.0));
}

inline RecursionMode parse_mode(const std::string& s) {
  auto m = parse_recursion_mode(s);
  if (!m) throw InvalidArgument("mode must be paper_printed or steady_derived, got '" + s + "'");
  return *m;
}

inline DepthModel parse_depth(const std::string& s) {
  auto d = parse_depth_model(s);
  if (!d) throw InvalidArgument("depth must be full or shallow, got '" + s + "'");
  return *d;
}

/// "%.17g": round-trip exact for doubles and stable across runs.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void escape(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

inline void write(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        escape(os, it.key());
        os << ": ";
        write(os, it.value(), indent + 2);
      }
      os << '\n' << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write(os, j[i], indent + 2);
      }
      os << '\n' << close << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      // JSON has no inf/nan
      if (std::isfinite(v))
        os << num(v);
      else
        os << "null";
      return;
    }
    case Json::value_t::string: escape(os, j.get<std::string>()); return;
    default: os << j.dump();
  }
}

}  // namespace detail

/// Pretty JSON with every float printed to 17 significant digits.
inline std::string to_text(const Json& j) {
  std::ostringstream os;
  detail::write(os, j, 0);
  os << '\n';
  return os.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
}

/// CSV with a header row; all values through num().
class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      os_ << (first ? "" : ",") << h;
      first = false;
    }
    os_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      os_ << (first ? "" : ",") << num(v);
      first = false;
    }
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

}  // namespace gkdv::cli
