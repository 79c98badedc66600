// Copyright (c) 2026 The LayoutRank Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LAYOUTRANK_ERRORS_HPP
#define LAYOUTRANK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace layoutrank {

// Base of every error the library throws. The CLI maps DataError to exit
// code 3 and VersionError to exit code 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

#define LAYOUTRANK_DEFINE_ERROR(Name, Base)       \
  class Name : public Base {                      \
   public:                                        \
    explicit Name(const std::string& what)        \
        : Base(std::string(#Name ": ") + what) {} \
  };

// dom-ingest
LAYOUTRANK_DEFINE_ERROR(EmptyDocument, DataError)

class SchemaError : public DataError {
 public:
  SchemaError(std::size_t line, const std::string& what)
      : DataError("SchemaError(line=" + std::to_string(line) + "): " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// featurizer
LAYOUTRANK_DEFINE_ERROR(EmptyCorpus, DataError)

// tensor engine
LAYOUTRANK_DEFINE_ERROR(ShapeMismatch, Error)
LAYOUTRANK_DEFINE_ERROR(EmptySegment, Error)
LAYOUTRANK_DEFINE_ERROR(BadProbability, Error)
LAYOUTRANK_DEFINE_ERROR(NonScalarLoss, Error)
LAYOUTRANK_DEFINE_ERROR(NonFinite, Error)

// trainer
LAYOUTRANK_DEFINE_ERROR(LengthMismatch, DataError)
LAYOUTRANK_DEFINE_ERROR(Diverged, Error)
LAYOUTRANK_DEFINE_ERROR(MissingClass, DataError)

// evaluator
LAYOUTRANK_DEFINE_ERROR(NoComparablePairs, DataError)
LAYOUTRANK_DEFINE_ERROR(SingleClass, DataError)
LAYOUTRANK_DEFINE_ERROR(ShortList, DataError)
LAYOUTRANK_DEFINE_ERROR(EmptyCounts, DataError)

// corpus-synth
LAYOUTRANK_DEFINE_ERROR(BadSpec, DataError)
LAYOUTRANK_DEFINE_ERROR(BadRatios, DataError)

// pipeline
LAYOUTRANK_DEFINE_ERROR(SchemaMismatch, VersionError)
LAYOUTRANK_DEFINE_ERROR(BadWeight, DataError)
LAYOUTRANK_DEFINE_ERROR(MetricMismatch, DataError)

#undef LAYOUTRANK_DEFINE_ERROR

}  // namespace layoutrank

#endif  // LAYOUTRANK_ERRORS_HPP
