#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hvertex/lca.hpp"

namespace hvertex {

enum class VerifyErrorKind { UnknownSuite, UnknownAlgebra };

class VerifyError : public std::runtime_error {
 public:
  VerifyError(VerifyErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  VerifyErrorKind kind() const { return kind_; }

 private:
  VerifyErrorKind kind_;
};

struct Failure {
  std::string identity;
  std::string counterexample;
};

struct SuiteReport {
  std::string suite;
  std::string algebra;
  int trials = 0;
  std::vector<Failure> failures;
  // Observations that are not failures (which reading of a formula matched).
  std::vector<std::string> notes;
  double elapsed = 0;

  bool pass() const { return failures.empty(); }
  // Without elapsed the output is reproducible byte for byte.
  std::string to_json(bool with_elapsed = true) const;
};

struct SuiteOptions {
  int degree = 2;
  int trials = 20;
  uint64_t seed = 7;
  // sum-bracket: also test both readings of the left recursion.
  bool left_recursion = false;
};

const std::vector<std::string>& suite_names();

SuiteReport run_suite(std::string_view suite, const LCAlgebra& alg, const SuiteOptions& opts = {});
// Built-in algebra by id.
SuiteReport run_suite(std::string_view suite, std::string_view algebra, const SuiteOptions& opts = {});

}  // namespace hvertex
