#pragma once

#include <stdexcept>
#include <string>

namespace vec2topic {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by build_vocabulary when fewer than two noun-vocabulary words
// survive filtering; nothing downstream can run on that.
struct EmptyNounVocab : Error {
  using Error::Error;
};

struct EmptyCorpus : Error {
  using Error::Error;
};

// Malformed vector file; the message carries file:line (text format) or
// file:offset (binary format).
struct FormatError : Error {
  using Error::Error;
};

struct EmptyEmbeddingSet : Error {
  using Error::Error;
};

struct ZeroVector : Error {
  using Error::Error;
};

struct KTooLarge : Error {
  using Error::Error;
};

struct TooFewWords : Error {
  using Error::Error;
};

struct DegenerateCorpus : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Wraps a module error with the pipeline stage it surfaced in.
struct PipelineError : Error {
  PipelineError(const std::string& stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage(stage) {}
  std::string stage;
};

}  // namespace vec2topic
