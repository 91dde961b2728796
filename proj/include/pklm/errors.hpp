#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pklm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyData : public Error {
 public:
  EmptyData() : Error("dataset contains no rows") {}
};

class AllMissingRow : public Error {
 public:
  explicit AllMissingRow(std::size_t row)
      : Error("row " + std::to_string(row + 1) + " has every cell missing"), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& what)
      : Error("parse error at row " + std::to_string(row + 1) + ", column " +
              std::to_string(col + 1) + ": " + what),
        row_(row),
        col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class RaggedRow : public Error {
 public:
  RaggedRow(std::size_t row, std::size_t expected, std::size_t got)
      : Error("record " + std::to_string(row + 1) + " has " + std::to_string(got) +
              " fields, expected " + std::to_string(expected)),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class DimensionTooSmall : public Error {
 public:
  explicit DimensionTooSmall(std::size_t p)
      : Error("need at least 2 columns to form a projection pair, got " + std::to_string(p)) {}
};

class SingleClass : public Error {
 public:
  SingleClass() : Error("training labels contain a single class") {}
};

class EmptyTraining : public Error {
 public:
  EmptyTraining() : Error("training set is empty") {}
};

class NoProjections : public Error {
 public:
  NoProjections() : Error("cannot aggregate an empty set of projection statistics") {}
};

class InsufficientData : public Error {
 public:
  InsufficientData()
      : Error("no usable projection found within the resampling budget; "
              "the dataset is too small or too sparse to test") {}
};

class BadSpec : public Error {
 public:
  using Error::Error;
};

class BadConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace pklm
