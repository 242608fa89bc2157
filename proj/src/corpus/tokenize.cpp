// Copyright 2026 The qaug Authors.
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

#include <array>
#include <cstdint>

#include "qaug/corpus.hpp"

namespace qaug {
namespace {

constexpr std::array<std::string_view, 5> kReserved = {
    kAskAnswerToken, kAnswerToken, kAskToken, kQsepToken, kMaskToken};

enum class CharClass { space, punct, word };

struct Decoded {
  char32_t cp;
  std::size_t len;
};

Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1};
  }
  if (i + len > s.size()) return {b0, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {b0, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

CharClass classify(char32_t cp) {
  if (cp < 0x80) {
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v')
      return CharClass::space;
    if ((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z'))
      return CharClass::word;
    if (cp < 0x20 || cp == 0x7F) return CharClass::space;
    return CharClass::punct;
  }
  if (cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200B) || cp == 0x202F || cp == 0x205F ||
      cp == 0x3000)
    return CharClass::space;
  if ((cp >= 0xA1 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 || (cp >= 0x2010 && cp <= 0x205E))
    return CharClass::punct;
  return CharClass::word;
}

std::string_view reserved_at(std::string_view text, std::size_t i) {
  if (text[i] != '<') return {};
  for (auto tok : kReserved) {
    if (text.substr(i, tok.size()) == tok) return tok;
  }
  return {};
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

template <typename Emit>
void scan_tokens(std::string_view text, Emit&& emit) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (auto r = reserved_at(text, i); !r.empty()) {
      emit(i, i + r.size());
      i += r.size();
      continue;
    }
    const auto d = decode_utf8(text, i);
    switch (classify(d.cp)) {
      case CharClass::space:
        i += d.len;
        break;
      case CharClass::punct:
        emit(i, i + d.len);
        i += d.len;
        break;
      case CharClass::word: {
        const std::size_t begin = i;
        i += d.len;
        while (i < text.size() && reserved_at(text, i).empty()) {
          const auto n = decode_utf8(text, i);
          if (classify(n.cp) != CharClass::word) break;
          i += n.len;
        }
        emit(begin, i);
        break;
      }
    }
  }
}

std::string lowered(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ascii_lower(c);
  return out;
}

}  // namespace

bool is_reserved_token(std::string_view s) {
  for (auto tok : kReserved)
    if (s == tok) return true;
  return false;
}

std::vector<std::string> word_tokenize(std::string_view text) {
  std::vector<std::string> out;
  scan_tokens(text, [&](std::size_t b, std::size_t e) { out.push_back(lowered(text.substr(b, e - b))); });
  return out;
}

std::vector<TokenOffset> word_tokenize_with_offsets(std::string_view text) {
  std::vector<TokenOffset> out;
  scan_tokens(text, [&](std::size_t b, std::size_t e) {
    out.push_back({lowered(text.substr(b, e - b)), b, e});
  });
  return out;
}

std::size_t count_tokens(std::string_view text) {
  std::size_t n = 0;
  scan_tokens(text, [&](std::size_t, std::size_t) { ++n; });
  return n;
}

bool is_punctuation_token(std::string_view token) {
  if (token.empty() || is_reserved_token(token)) return false;
  std::size_t i = 0;
  while (i < token.size()) {
    const auto d = decode_utf8(token, i);
    if (classify(d.cp) == CharClass::word) return false;
    i += d.len;
  }
  return true;
}

std::vector<std::string> content_tokens(std::string_view text) {
  std::vector<std::string> out;
  scan_tokens(text, [&](std::size_t b, std::size_t e) {
    auto tok = text.substr(b, e - b);
    if (!is_punctuation_token(tok)) out.push_back(lowered(tok));
  });
  return out;
}

std::size_t prefix_end_for_tokens(std::string_view text, std::size_t n) {
  if (n == 0) return 0;
  std::size_t seen = 0;
  std::size_t end = text.size();
  bool done = false;
  scan_tokens(text, [&](std::size_t, std::size_t e) {
    if (done) return;
    if (++seen == n) {
      end = e;
      done = true;
    }
  });
  return end;
}

}  // namespace qaug
