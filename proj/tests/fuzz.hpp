#pragma once

#include "flunow/error.hpp"

#include <cctype>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace fuzz {

// Mutates a valid seed document. Mostly structural edits near the seed so the
// parser gets past the header; every tenth input is raw random bytes.
inline std::string mutate(std::string_view seed, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> byte(0, 255);
  if (rng() % 10 == 0) {
    std::string junk(rng() % 200, '\0');
    for (auto& c : junk) c = static_cast<char>(byte(rng));
    return junk;
  }
  static constexpr std::string_view kTokens[] = {",", "\n", "-", "W", "0", "9", "100", "101", "-1", "2010-W53",
                                                 "2009-W53", "\xd8\xa7", "\xff", "\xc0\xaf", "NaN", "1e3", " ", "\r"};
  std::string s(seed);
  const int edits = 1 + static_cast<int>(rng() % 6);
  for (int e = 0; e < edits; ++e) {
    const std::size_t pos = s.empty() ? 0 : rng() % (s.size() + 1);
    switch (rng() % 7) {
      case 0:
        if (!s.empty() && pos < s.size()) s[pos] = static_cast<char>(byte(rng));
        break;
      case 1:
        if (pos < s.size()) s.erase(pos, 1 + rng() % 8);
        break;
      case 2:
        s.insert(pos, kTokens[rng() % std::size(kTokens)]);
        break;
      case 3:
        s.resize(pos);
        break;
      case 4: {
        // Duplicate a line.
        const auto nl = s.find('\n', pos);
        const auto begin = s.rfind('\n', pos == 0 ? 0 : pos - 1);
        const std::size_t b = begin == std::string::npos ? 0 : begin + 1;
        const std::size_t end = nl == std::string::npos ? s.size() : nl + 1;
        if (b < end) s.insert(end, s.substr(b, end - b));
        break;
      }
      case 5:
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          s[pos] = static_cast<char>('0' + rng() % 10);
        }
        break;
      default:
        s.insert(pos, std::string(1, static_cast<char>(byte(rng))));
        break;
    }
  }
  return s;
}

// Runs `parse` on `count` mutated inputs. Returns the number of inputs where the
// parser escaped with something other than flunow::Error.
inline int crashes(const std::function<void(std::string_view)>& parse, std::string_view seed, int count,
                   std::uint64_t rng_seed, std::string* first_bad = nullptr) {
  std::mt19937_64 rng(rng_seed);
  int bad = 0;
  for (int i = 0; i < count; ++i) {
    const std::string input = mutate(seed, rng);
    try {
      parse(input);
    } catch (const flunow::Error&) {
    } catch (...) {
      if (bad++ == 0 && first_bad) *first_bad = input;
    }
  }
  return bad;
}

}  // namespace fuzz
