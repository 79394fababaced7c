#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace byos {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//===----------------------------------------------------------------------===//
// kconfig
//===----------------------------------------------------------------------===//

class FileNotFound : public Error {
 public:
  explicit FileNotFound(std::string path)
      : Error("file not found: " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string file, std::size_t line, const std::string& message)
      : Error(file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(std::string construct, const std::string& file, std::size_t line)
      : Error(file + ":" + std::to_string(line) + ": unsupported construct '" + construct + "'"),
        construct_(std::move(construct)) {}
  const std::string& construct() const noexcept { return construct_; }

 private:
  std::string construct_;
};

//===----------------------------------------------------------------------===//
// odkg
//===----------------------------------------------------------------------===//

class LayerMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidTriple : public Error {
 public:
  using Error::Error;
};

class WriteFailure : public Error {
 public:
  explicit WriteFailure(const std::string& path) : Error("cannot write " + path) {}
};

class UnknownEntity : public Error {
 public:
  explicit UnknownEntity(const std::string& key) : Error("unknown entity: " + key) {}
};

class SchemaVersionTooNew : public Error {
 public:
  SchemaVersionTooNew(int found, int supported)
      : Error("schema version " + std::to_string(found) + " is newer than supported version " +
              std::to_string(supported)) {}
};

class CorruptFile : public Error {
 public:
  CorruptFile(std::size_t offset, const std::string& detail)
      : Error("corrupt file at offset " + std::to_string(offset) + ": " + detail), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

//===----------------------------------------------------------------------===//
// completion clients and knowledge construction
//===----------------------------------------------------------------------===//

class ClientError : public Error {
 public:
  using Error::Error;
};

class ParseFailure : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

//===----------------------------------------------------------------------===//
// reasoner
//===----------------------------------------------------------------------===//

class EmptyObjective : public Error {
 public:
  EmptyObjective() : Error("tuning objective is empty") {}
};

class NoAlignment : public Error {
 public:
  explicit NoAlignment(std::vector<std::string> entities)
      : Error("no concept alignment for objective entities"), entities_(std::move(entities)) {}
  const std::vector<std::string>& entities() const noexcept { return entities_; }

 private:
  std::vector<std::string> entities_;
};

class UnknownRelation : public Error {
 public:
  explicit UnknownRelation(const std::string& relation)
      : Error("relation has no strength assigned: " + relation) {}
};

//===----------------------------------------------------------------------===//
// config engine
//===----------------------------------------------------------------------===//

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(std::string symbol)
      : Error("unknown symbol: " + symbol), symbol_(std::move(symbol)) {}
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(std::vector<std::string> symbols)
      : Error("default resolution did not converge"), symbols_(std::move(symbols)) {}
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

 private:
  std::vector<std::string> symbols_;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class ScorerError : public Error {
 public:
  using Error::Error;
};

//===----------------------------------------------------------------------===//
// maintenance and cli
//===----------------------------------------------------------------------===//

class StaleKg : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace byos
