#ifndef XSCAT_ERRORS_HPP
#define XSCAT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace xscat {

// Status codes shared by the C API and the CLI exit-code contract.
enum class Status : int {
  ok = 0,
  internal = 1,
  validation = 2,
  underdetermined = 3,
  rank_deficient = 4,
  threshold_exceeded = 5,
  io = 6,
};

class Error : public std::runtime_error {
 public:
  Error(Status code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Status code() const { return code_; }

 private:
  Status code_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(Status::validation, what) {}
};

struct UnderdeterminedError : Error {
  explicit UnderdeterminedError(const std::string& what) : Error(Status::underdetermined, what) {}
};

struct RankDeficientError : Error {
  RankDeficientError(const std::string& what, std::vector<double> sv)
      : Error(Status::rank_deficient, what), singular_values(std::move(sv)) {}
  std::vector<double> singular_values;  // full profile, descending
};

struct ThresholdError : Error {
  explicit ThresholdError(const std::string& what) : Error(Status::threshold_exceeded, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(Status::io, what) {}
};

}  // namespace xscat

#endif
