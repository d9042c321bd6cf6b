/* Copyright 2026 The fdakit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FDAKIT_ERROR_HPP_
#define FDAKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fdakit {

// Base of every error thrown by the library. The subclasses mirror the error
// classes that callers (the CLI in particular) need to tell apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes that do not match or are empty.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar argument outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A value outside its mathematical domain (negative amplitude, NaN sample).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A call whose documented precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed on-disk data. The message names the offending field.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Label data that is inconsistent with the declared class count.
class DataError : public Error {
 public:
  using Error::Error;
};

// A memory budget that cannot hold the smallest unit of work.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdakit

#endif  // FDAKIT_ERROR_HPP_
