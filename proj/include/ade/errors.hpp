#pragma once

#include <stdexcept>
#include <string>

namespace ade {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidRank : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct IdentityFailure : Error {
  IdentityFailure(std::string type_name, std::string what_failed, int coord,
                  std::string expected_value, std::string actual_value)
      : Error(type_name + ": " + what_failed + " mismatch at coordinate " +
              std::to_string(coord) + " (expected " + expected_value + ", got " +
              actual_value + ")"),
        type(std::move(type_name)),
        check(std::move(what_failed)),
        coordinate(coord),
        expected(std::move(expected_value)),
        actual(std::move(actual_value)) {}

  std::string type;
  std::string check;
  int coordinate;
  std::string expected;
  std::string actual;
};

struct ZeroPoint : Error {
  ZeroPoint() : Error("point is zero") {}
};

struct FactorBudgetExceeded : Error {
  using Error::Error;
};

struct BudgetExceeded : Error {
  using Error::Error;
};

struct ZeroDiscriminant : Error {
  ZeroDiscriminant() : Error("discriminant vanishes") {}
};

struct NoShift : Error {
  using Error::Error;
};

struct ShapeError : Error {
  using Error::Error;
};

struct NotImplemented : Error {
  using Error::Error;
};

}  // namespace ade
