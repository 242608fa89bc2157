// Copyright 2026 The qaug Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace qaug {

// Root of every error the library raises. Subclasses name the failure so
// callers can catch exactly what they can recover from.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyDocument : public Error {
 public:
  EmptyDocument() : Error("empty document") {}
  explicit EmptyDocument(const std::string& what) : Error(what) {}
};

class UnsupportedDialogue : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class MissingReference : public Error {
 public:
  MissingReference() : Error("at least one reference is required") {}
  explicit MissingReference(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Remote backend exhausted its retries (timeouts, connection errors, 5xx).
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

// Remote backend answered 4xx; the request is malformed and is not retried.
class BackendRejected : public Error {
 public:
  using Error::Error;
};

class FixtureMiss : public Error {
 public:
  using Error::Error;
};

class QuestionCountMismatch : public Error {
 public:
  QuestionCountMismatch(std::size_t expected, std::size_t got)
      : Error("expected " + std::to_string(expected) + " questions, got " +
              std::to_string(got)) {}
};

class EmptyPlan : public Error {
 public:
  using Error::Error;
};

}  // namespace qaug
