#pragma once

#include "fraclim/errors.hpp"
#include "fraclim/numeric.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fraclim::seq {

// coef * seq(n + shift)
struct Term {
  std::size_t seq = 0;
  std::int64_t coef = 0;
  std::int64_t shift = 0;
};

// seq(b*n + residue) = sum(terms) + constant, for n >= n_min
struct Rule {
  std::size_t seq = 0;
  int residue = 0;
  std::vector<Term> terms;
  std::int64_t constant = 0;
  int line = 0;
};

// A linear b-regular system. Several sequences may be defined together; the
// one named by `name` is sequence 0.
struct RecurrenceSpec {
  int base = 0;
  std::string name;
  std::int64_t n_min = 1;
  std::vector<std::string> sequences;
  std::vector<std::map<std::int64_t, BigInt>> initials;
  std::vector<std::vector<Rule>> rules;  // [seq][residue]
  std::string source;

  std::size_t index_of(std::string_view seq_name) const;  // npos if absent
  std::int64_t max_shift() const;
};

enum class SpecErrorKind { Syntax, Header, MissingResidue, DuplicateResidue, NonWellFounded, MissingInitial };

class SpecError : public Error {
 public:
  SpecError(SpecErrorKind kind, std::string message, int line = 0, int column = 0)
      : Error(std::move(message)), kind_(kind), line_(line), column_(column) {}
  SpecErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  // MissingResidue: residue; MissingInitial: index; NonWellFounded: offending shift
  std::int64_t detail = -1;
  std::string sequence;

 private:
  SpecErrorKind kind_;
  int line_;
  int column_;
};

RecurrenceSpec parse_spec(std::string_view text, std::string_view origin = "<spec>");
RecurrenceSpec load_spec(const std::string& path);
std::string spec_hash(const RecurrenceSpec& spec);  // fnv-1a 64, hex
std::string format_spec(const RecurrenceSpec& spec);

}  // namespace fraclim::seq
