#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qov {

// Index of an element in a carrier's enumeration. -1 marks a result that
// left the representable window of a free abelian carrier.
using ElemIdx = int32_t;
inline constexpr ElemIdx kOutOfWindow = -1;

enum class Errc {
  ParseError,
  InvalidInput,
  CarrierTooLarge,
  SpecMismatch,
  NotReflexive,
  NotTransitive,
  NotTotal,
  NotClosed,
  UnknownLabel,
  NotValuational,
  NotConvex,
  ZeroClassFat,
  MissingFamilyEntry,
  PreconditionFailed,
  ConeAxiomFailed,
  WindowUndecidable,
  NotAHomomorphism,
  DivisionByZero,
  TheoremViolation,
};

const char* errc_name(Errc c);

// A concrete violating instance: the tag says which condition broke, the
// indices identify the elements (in the enumeration order of the carrier the
// check ran on).
struct Witness {
  std::string tag;
  std::vector<ElemIdx> elems;
  std::string note;
};

struct Failure {
  Errc code = Errc::InvalidInput;
  std::string message;
  std::optional<Witness> witness;
};

// Thrown for malformed inputs and usage errors; verification verdicts are
// returned as values, never thrown.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg, std::optional<Witness> w = std::nullopt)
      : std::runtime_error(msg), code(code), witness(std::move(w)) {}
  Errc code;
  std::optional<Witness> witness;
};

// Value-or-failure result for the decision procedures whose failure outcomes
// are themselves reportable results (quotient induction, lifting, ...).
template <typename T>
class OrFail {
 public:
  OrFail(T v) : v_(std::move(v)) {}
  OrFail(Failure f) : v_(std::move(f)) {}
  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }
  T& value() { return std::get<T>(v_); }
  const T& value() const { return std::get<T>(v_); }
  T& operator*() { return value(); }
  const T& operator*() const { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }
  const Failure& failure() const { return std::get<Failure>(v_); }

 private:
  std::variant<T, Failure> v_;
};

// Outcome of an exhaustive scan. `instances` counts the quantifier instances
// covered; `skips` counts instances whose arithmetic left the window (they are
// counted, not failed). On failure, `skips` refers to the prefix before the
// first witness, so serial and parallel scans report identical results.
struct CheckResult {
  std::string check;
  bool pass = true;
  std::optional<Witness> witness;
  uint64_t instances = 0;
  uint64_t skips = 0;
};

enum class Exec { Serial, Parallel };

uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

}  // namespace qov
