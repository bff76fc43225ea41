#pragma once

#include "fraclim/seq/engine.hpp"

#include <cstdint>
#include <vector>

namespace fraclim::seq {

class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

// Distinct Parikh vectors among the length-n factors of word[0 .. prefix_len).
std::size_t abelian_oracle(SequenceEngine& word, std::size_t n, std::size_t prefix_len);
std::size_t abelian_complexity(const std::vector<std::int64_t>& word, std::size_t n);

}  // namespace fraclim::seq
