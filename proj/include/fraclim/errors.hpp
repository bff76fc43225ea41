#pragma once

#include <stdexcept>
#include <string>

namespace fraclim {

// exit-code classes used by the CLI: usage 2, verification 1, resource 3
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 2; }
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class ExactPathUnavailable : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class IoError : public Error {
 public:
  using Error::Error;
};

class VerificationError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 1; }
};

// FRACLIM_MAX_CELLS or 2^24
unsigned long long max_cells();
void check_cells(unsigned long long cells, const std::string& what);
// guard on base^level cells
void check_cells(int base, int level, const std::string& what);

}  // namespace fraclim
