/*
 Copyright 2026 The lkcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef LKCERT_ERRORS_HPP
#define LKCERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lkcert {

enum class ErrorKind {
  Parameter,
  Shape,
  Format,
  Bound,
  Certificate,
  Divergence,
  StaleCertificate,
  Config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lkcert

#endif  // LKCERT_ERRORS_HPP
