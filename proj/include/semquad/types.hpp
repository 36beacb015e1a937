#ifndef SEMQUAD_TYPES_HPP_
#define SEMQUAD_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace semquad {

// Label codes are dense non-negative integers; dimension 0 is the identity.
using Label = std::uint32_t;
using LabelVector = std::vector<Label>;

// A point in the d-dimensional destination space.
using Embedding = std::vector<double>;

struct Sample {
  std::uint64_t id = 0;
  std::vector<double> features;
  LabelVector labels;
};

struct DatasetHeader {
  std::size_t feature_dim = 0;               // n
  std::size_t label_dims = 0;                // t, dimension 0 is the ID
  std::vector<Label> cardinalities;          // one per label dimension
  std::vector<std::string> names;            // names[0] must be "ID"
};

struct Dataset {
  DatasetHeader header;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }

  // Throws ValidationError on any header/sample inconsistency.
  void validate() const;

  // Number of distinct identity codes (label dimension 0).
  std::size_t identity_count() const;
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched vector lengths (features, labels, embeddings).
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// Bad user-supplied configuration values.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Malformed dataset/model files; message carries the line number.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Dataset contents violating declared invariants.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Evaluation protocol preconditions (missing genuine pairs, closed/open mix-ups).
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error(what) {}
};

// Training cannot proceed (e.g. every mini-batch degenerate).
class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace semquad

#endif  // SEMQUAD_TYPES_HPP_
