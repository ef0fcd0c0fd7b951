#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sslab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Plain MLE (and the joint composition) has no value on zero samples.
class EmptySample : public Error {
 public:
  using Error::Error;
};

// Exact enumeration would visit more outcomes than the configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t required, std::uint64_t cap)
      : Error("exact enumeration needs " + std::to_string(required) +
              " outcomes, cap is " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sslab
