#include "fraclim/seq/abelian.hpp"

#include <map>
#include <set>

namespace fraclim::seq {

std::size_t abelian_complexity(const std::vector<std::int64_t>& word, std::size_t n) {
  if (n == 0) return 1;
  if (word.size() < n + 1) throw WindowTooSmall("prefix of length " + std::to_string(word.size()) +
                                                " is too short for factors of length " + std::to_string(n));
  std::map<std::int64_t, std::size_t> letters;
  for (auto c : word) letters.emplace(c, letters.size());
  std::vector<int> ids(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) ids[i] = static_cast<int>(letters[word[i]]);

  std::vector<std::uint32_t> count(letters.size(), 0);
  for (std::size_t i = 0; i < n; ++i) ++count[static_cast<std::size_t>(ids[i])];
  std::set<std::vector<std::uint32_t>> seen{count};
  for (std::size_t i = n; i < word.size(); ++i) {
    ++count[static_cast<std::size_t>(ids[i])];
    --count[static_cast<std::size_t>(ids[i - n])];
    seen.insert(count);
  }
  return seen.size();
}

std::size_t abelian_oracle(SequenceEngine& word, std::size_t n, std::size_t prefix_len) {
  if (prefix_len < n + 1)
    throw WindowTooSmall("prefix_len " + std::to_string(prefix_len) + " < n + 1 = " + std::to_string(n + 1));
  std::vector<std::int64_t> w(prefix_len);
  for (std::size_t i = 0; i < prefix_len; ++i) w[i] = word.eval_small(i);
  return abelian_complexity(w, n);
}

}  // namespace fraclim::seq
