#include <algorithm>
#include <cctype>

#include "cktbench/equiv/equiv.hpp"

namespace cktbench::equiv {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Lowercase with runs of whitespace collapsed to one space.
std::string normalize(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : trim(s)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// "b", "b)", "(b)", "b." -> "b"; anything else unchanged.
std::string letter_of(const std::string& s) {
  std::string t = s;
  if (t.size() == 3 && t.front() == '(' && t.back() == ')') t = t.substr(1, 1);
  if (t.size() == 2 && (t.back() == ')' || t.back() == '.')) t = t.substr(0, 1);
  return t;
}

std::string resolve(std::string_view raw, const std::vector<std::string>& options) {
  const std::string n = normalize(raw);
  const std::string l = letter_of(n);
  if (l.size() == 1 && std::isalpha(static_cast<unsigned char>(l[0]))) return l;
  for (std::size_t i = 0; i < options.size() && i < 26; ++i) {
    if (normalize(options[i]) == n) return std::string(1, static_cast<char>('a' + i));
  }
  // "C) None of the above" style: a letter prefix followed by its text.
  if (n.size() > 3 && std::isalpha(static_cast<unsigned char>(n[0])) && (n[1] == ')' || n[1] == '.') && n[2] == ' ') {
    return std::string(1, n[0]);
  }
  return n;
}

}  // namespace

std::string extract_answer(std::string_view response) {
  static constexpr std::string_view open = "<answer>", close = "</answer>";
  const auto start = response.rfind(open);
  if (start != std::string_view::npos) {
    const auto body = start + open.size();
    auto end = response.find(close, body);
    if (end == std::string_view::npos) end = response.size();
    return trim(response.substr(body, end - body));
  }
  std::string last;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    auto nl = response.find('\n', pos);
    if (nl == std::string_view::npos) nl = response.size();
    const auto line = response.substr(pos, nl - pos);
    if (line.find('=') != std::string_view::npos) last = trim(line);
    pos = nl + 1;
  }
  if (!last.empty()) return last;
  return trim(response);
}

bool grade_mc(std::string_view selected, std::string_view key, const std::vector<std::string>& options) {
  const std::string s = resolve(selected, options);
  return !s.empty() && s == resolve(key, options);
}

}  // namespace cktbench::equiv
