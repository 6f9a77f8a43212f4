#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctxsearch::text {

// Whitespace + punctuation splitting. Case is preserved; apostrophes and
// hyphens inside a word stay attached.
std::vector<std::string> tokenize(std::string_view text);

// True if the token consists only of punctuation characters.
bool isPunctuation(std::string_view token);

// ASCII lowercasing; bytes >= 0x80 are left alone.
std::string toLower(std::string_view s);

// The form under which a word is indexed and searched.
inline std::string normalizeWord(std::string_view token) { return toLower(token); }

// First `n` UTF-8 code points of `s` (all of `s` if shorter).
std::string_view utf8Prefix(std::string_view s, std::size_t n);
std::size_t utf8Length(std::string_view s);

// Canonical entity/class names may use spaces or underscores; queries use
// underscores. Both compare equal after this mapping.
std::string nameKey(std::string_view name);

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);
bool startsWith(std::string_view s, std::string_view prefix);

}  // namespace ctxsearch::text
