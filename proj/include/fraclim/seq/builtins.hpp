#pragma once

#include "fraclim/seq/engine.hpp"
#include "fraclim/seq/spec.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fraclim::seq {

class UnknownBuiltin : public Error {
 public:
  using Error::Error;
};

// rho, rudin_shapiro, thue_morse, tm_sum, tm_double_sum, rs_sum, zero
std::vector<std::string> builtin_names();
std::string builtin_source(std::string_view name);
RecurrenceSpec builtin_spec(std::string_view name);
SequenceEngine builtin(std::string_view name);

}  // namespace fraclim::seq
