/* Copyright 2026 The PIM Authors. All Rights Reserved.

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

#ifndef PIM_ERROR_HPP_
#define PIM_ERROR_HPP_

#include <exception>
#include <stdexcept>
#include <string>

namespace pim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a kernel or special function
// (singular point, coincident image, point outside a grid hull).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A Floquet root or a geometric image-stack denominator vanished.
class WoodAnomaly : public Error {
 public:
  using Error::Error;
};

// A series hit its hard term cap before meeting the tolerance.
class NotConverged : public Error {
 public:
  using Error::Error;
};

// Problem failed validation or a plan precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Rethrows `e` as the same library error type with `context` prepended.
[[noreturn]] inline void rethrow_with_context(const std::exception_ptr& e,
                                              const std::string& context) {
  try {
    std::rethrow_exception(e);
  } catch (const WoodAnomaly& x) {
    throw WoodAnomaly(context + x.what());
  } catch (const NotConverged& x) {
    throw NotConverged(context + x.what());
  } catch (const DomainError& x) {
    throw DomainError(context + x.what());
  } catch (const InvalidArgument& x) {
    throw InvalidArgument(context + x.what());
  } catch (const IoError& x) {
    throw IoError(context + x.what());
  } catch (const Error& x) {
    throw Error(context + x.what());
  }
}

}  // namespace pim

#endif  // PIM_ERROR_HPP_
