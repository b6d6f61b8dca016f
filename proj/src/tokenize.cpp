#include "topicscope/corpus.hpp"

#include <algorithm>
#include <cctype>

namespace topicscope {
namespace {

// Splits UTF-8 into code points. Invalid lead/continuation bytes come back as
// a one-byte string with ok=false so callers can treat them as separators.
struct CodePoint {
  std::string bytes;
  char32_t value = 0;
  bool ok = true;
};

std::vector<CodePoint> decode_utf8(const std::string& text) {
  std::vector<CodePoint> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t value = 0;
    if (lead < 0x80) {
      len = 1;
      value = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      len = 2;
      value = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3;
      value = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      len = 4;
      value = lead & 0x07;
    }
    bool ok = len != 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto c = static_cast<unsigned char>(text[i + k]);
      if ((c & 0xC0) != 0x80) ok = false;
      value = (value << 6) | (c & 0x3F);
    }
    if (!ok) {
      out.push_back({text.substr(i, 1), 0, false});
      ++i;
      continue;
    }
    out.push_back({text.substr(i, len), value, true});
    i += len;
  }
  return out;
}

bool is_ascii_alnum(char32_t c) {
  return c < 0x80 && std::isalnum(static_cast<unsigned char>(c));
}

// Non-ASCII punctuation and spacing blocks that never belong to a word.
bool is_wide_separator(char32_t c) {
  return (c >= 0x2000 && c <= 0x206F)     // general punctuation
         || (c >= 0x3000 && c <= 0x303F)  // CJK symbols and punctuation
         || (c >= 0xFE30 && c <= 0xFE4F)  // CJK compatibility forms
         || (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) ||
         (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65) || c == 0x00A0 ||
         (c >= 0x00A1 && c <= 0x00BF) || c == 0x00D7 || c == 0x00F7;
}

bool all_digits(const std::string& token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); });
}

void push_ascii_token(std::string& current, std::vector<std::string>& out, const TokenizeOptions& options) {
  if (current.empty()) return;
  if (options.keep_numeric || !all_digits(current)) out.push_back(current);
  current.clear();
}

void segment_forward_max(const std::vector<CodePoint>& run, const Lexicon* lexicon,
                         std::vector<std::string>& out) {
  std::size_t pos = 0;
  const std::size_t longest = lexicon ? lexicon->max_length() : 0;
  while (pos < run.size()) {
    std::size_t take = 1;
    for (std::size_t len = std::min(longest, run.size() - pos); len >= 2; --len) {
      std::string candidate;
      for (std::size_t k = 0; k < len; ++k) candidate += run[pos + k].bytes;
      if (lexicon->contains(candidate)) {
        take = len;
        break;
      }
    }
    std::string token;
    for (std::size_t k = 0; k < take; ++k) token += run[pos + k].bytes;
    out.push_back(std::move(token));
    pos += take;
  }
}

}  // namespace

Lexicon::Lexicon(const std::vector<std::string>& terms) {
  for (const auto& term : terms) {
    if (term.empty()) continue;
    terms_.insert(term);
    max_length_ = std::max(max_length_, decode_utf8(term).size());
  }
}

std::vector<std::string> tokenize(const std::string& text, Language language, const Lexicon* lexicon,
                                  const TokenizeOptions& options) {
  std::vector<std::string> out;
  std::string ascii;  // current en-style word
  std::vector<CodePoint> wide;
  const bool segment_wide = language == Language::zh;

  auto flush_wide = [&] {
    if (wide.empty()) return;
    segment_forward_max(wide, lexicon, out);
    wide.clear();
  };

  for (const auto& cp : decode_utf8(text)) {
    if (cp.ok && is_ascii_alnum(cp.value)) {
      flush_wide();
      ascii += static_cast<char>(std::tolower(static_cast<unsigned char>(cp.value)));
      continue;
    }
    const bool word_char = cp.ok && cp.value >= 0x80 && !is_wide_separator(cp.value);
    if (word_char && !segment_wide) {
      ascii += cp.bytes;
      continue;
    }
    push_ascii_token(ascii, out, options);
    if (word_char) {
      wide.push_back(cp);
    } else {
      flush_wide();
    }
  }
  push_ascii_token(ascii, out, options);
  flush_wide();
  return out;
}

std::size_t utf8_length(const std::string& text) { return decode_utf8(text).size(); }

}  // namespace topicscope
