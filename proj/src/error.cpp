// Copyright 2026 The iaoq Authors
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

#include "iaoq/error.hpp"

namespace iaoq {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidInput:
      return 2;
    case ErrorKind::Numerical:
      return 3;
    case ErrorKind::Io:
      return 4;
  }
  return 1;
}

const char *to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return "config error";
    case ErrorKind::InvalidInput:
      return "invalid input";
    case ErrorKind::Numerical:
      return "numerical failure";
    case ErrorKind::Io:
      return "I/O error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

}  // namespace iaoq
