#include "ctxsearch/text.h"

#include <cctype>

namespace ctxsearch::text {

namespace {
bool isSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool isPunct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}
}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (isSpace(c)) {
      flush();
    } else if (isPunct(c)) {
      bool inner = (c == '\'' || c == '-') && !current.empty() &&
                   i + 1 < text.size() && !isSpace(text[i + 1]) &&
                   !isPunct(text[i + 1]);
      if (inner) {
        current.push_back(c);
      } else {
        flush();
        tokens.emplace_back(1, c);
      }
    } else {
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

bool isPunctuation(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (!isPunct(c)) return false;
  }
  return true;
}

std::string toLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (static_cast<unsigned char>(c) < 0x80) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::string_view utf8Prefix(std::string_view s, std::size_t n) {
  std::size_t i = 0;
  std::size_t count = 0;
  while (i < s.size() && count < n) {
    ++i;
    while (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) ++i;
    ++count;
  }
  return s.substr(0, i);
}

std::size_t utf8Length(std::string_view s) {
  std::size_t count = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::string nameKey(std::string_view name) {
  std::string out = toLower(name);
  for (char& c : out) {
    if (c == ' ') c = '_';
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      return parts;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && isSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && isSpace(s.back())) s.remove_suffix(1);
  return s;
}

bool startsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace ctxsearch::text
