#include "ellgof/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ellgof/errors.hpp"

namespace ellgof {

namespace {

using nlohmann::json;

[[noreturn]] void fail(int line, const std::string& msg) {
  throw config_error("toml: line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

/// Strips a trailing comment, honoring string literals.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<std::string> parse_key_path(std::string_view key, int line) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : key) {
    if (c == '.') {
      if (current.empty()) fail(line, "empty key segment in '" + std::string(key) + "'");
      parts.push_back(current);
      current.clear();
    } else if (is_bare_key_char(c)) {
      current.push_back(c);
    } else if (c == ' ' || c == '\t') {
      // permitted around dots only; reject inside a segment
      if (!current.empty()) fail(line, "whitespace inside key '" + std::string(key) + "'");
    } else {
      fail(line, std::string("invalid key character '") + c + "'");
    }
  }
  if (current.empty()) fail(line, "empty key segment in '" + std::string(key) + "'");
  parts.push_back(current);
  return parts;
}

std::string parse_basic_string(std::string_view s, std::size_t& pos, int line) {
  std::string out;
  ++pos;  // opening quote
  while (pos < s.size() && s[pos] != '"') {
    char c = s[pos];
    if (c == '\\') {
      ++pos;
      if (pos >= s.size()) fail(line, "unterminated escape in string");
      switch (s[pos]) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default:
          fail(line, std::string("unsupported escape '\\") + s[pos] + "'");
      }
    } else {
      out.push_back(c);
    }
    ++pos;
  }
  if (pos >= s.size()) fail(line, "unterminated string");
  ++pos;  // closing quote
  return out;
}

json parse_scalar(std::string_view token, int line) {
  token = trim(token);
  if (token.empty()) fail(line, "missing value");
  if (token == "true") return json(true);
  if (token == "false") return json(false);

  // Integer first (no '.', 'e', 'inf' or 'nan' content).
  {
    long long v = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec == std::errc() && ptr == end) return json(v);
  }
  {
    std::string owned(token);
    char* endp = nullptr;
    const double v = std::strtod(owned.c_str(), &endp);
    if (endp == owned.c_str() + owned.size() && !owned.empty()) return json(v);
  }
  fail(line, "cannot parse value '" + std::string(token) + "'");
}

json parse_value(std::string_view s, std::size_t& pos, int line);

json parse_array(std::string_view s, std::size_t& pos, int line) {
  json arr = json::array();
  ++pos;  // '['
  for (;;) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == ',')) ++pos;
    if (pos >= s.size()) fail(line, "unterminated array");
    if (s[pos] == ']') {
      ++pos;
      return arr;
    }
    arr.push_back(parse_value(s, pos, line));
  }
}

json parse_value(std::string_view s, std::size_t& pos, int line) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  if (pos >= s.size()) fail(line, "missing value");
  if (s[pos] == '"') return json(parse_basic_string(s, pos, line));
  if (s[pos] == '[') return parse_array(s, pos, line);
  std::size_t end = pos;
  while (end < s.size() && s[end] != ',' && s[end] != ']') ++end;
  json v = parse_scalar(s.substr(pos, end - pos), line);
  pos = end;
  return v;
}

json* descend_tables(json& root, const std::vector<std::string>& path, int line) {
  json* node = &root;
  for (const auto& part : path) {
    if (node->is_array()) node = &node->back();
    auto it = node->find(part);
    if (it == node->end()) {
      (*node)[part] = json::object();
      node = &(*node)[part];
    } else {
      node = &*it;
    }
    if (!node->is_object() && !node->is_array()) {
      fail(line, "key '" + part + "' is already a value");
    }
  }
  if (node->is_array()) node = &node->back();
  return node;
}

}  // namespace

json parse_toml(std::string_view text) {
  json root = json::object();
  json* current = &root;

  std::vector<std::pair<int, std::string>> lines;
  {
    std::size_t start = 0;
    int no = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == '\n') {
        ++no;
        lines.emplace_back(no, std::string(text.substr(start, i - start)));
        start = i + 1;
      }
    }
  }

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = lines[li].first;
    std::string_view line = trim(strip_comment(lines[li].second));
    if (line.empty()) continue;

    if (line.starts_with("[[")) {
      if (!line.ends_with("]]")) fail(line_no, "malformed [[table]] header");
      const auto path = parse_key_path(trim(line.substr(2, line.size() - 4)), line_no);
      json* node = &root;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        node = descend_tables(*node, {path[i]}, line_no);
      }
      json& slot = (*node)[path.back()];
      if (slot.is_null()) slot = json::array();
      if (!slot.is_array()) fail(line_no, "'" + path.back() + "' is not an array of tables");
      slot.push_back(json::object());
      current = &slot.back();
      continue;
    }
    if (line.starts_with("[")) {
      if (!line.ends_with("]")) fail(line_no, "malformed [table] header");
      const auto path = parse_key_path(trim(line.substr(1, line.size() - 2)), line_no);
      current = descend_tables(root, path, line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const auto key_path = parse_key_path(trim(line.substr(0, eq)), line_no);
    std::string value_text(line.substr(eq + 1));

    // Arrays may continue over following lines until brackets balance.
    {
      auto bracket_balance = [](std::string_view s) {
        int depth = 0;
        bool in_string = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
          const char c = s[i];
          if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
          } else if (c == '"') {
            in_string = true;
          } else if (c == '[') {
            ++depth;
          } else if (c == ']') {
            --depth;
          }
        }
        return depth;
      };
      while (bracket_balance(value_text) > 0 && li + 1 < lines.size()) {
        ++li;
        value_text += ' ';
        value_text += std::string(trim(strip_comment(lines[li].second)));
      }
    }

    json* table = current;
    for (std::size_t i = 0; i + 1 < key_path.size(); ++i) {
      table = descend_tables(*table, {key_path[i]}, line_no);
    }
    if (table->contains(key_path.back())) {
      fail(line_no, "duplicate key '" + key_path.back() + "'");
    }
    std::size_t pos = 0;
    const json value = parse_value(value_text, pos, line_no);
    while (pos < value_text.size() &&
           (value_text[pos] == ' ' || value_text[pos] == '\t'))
      ++pos;
    if (pos != value_text.size()) fail(line_no, "trailing content after value");
    (*table)[key_path.back()] = value;
  }
  return root;
}

json load_toml(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_toml(buf.str());
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

}  // namespace ellgof
