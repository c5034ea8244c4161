// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace xmg {

/// Base of every error raised by the library. `name()` is the stable error
/// identifier surfaced to callers (CLI exit messages, bindings).
class Error : public std::runtime_error {
 public:
  Error(const char* name, const std::string& what)
      : std::runtime_error(std::string(name) + ": " + what), name_(name) {}

  const char* name() const noexcept { return name_; }

 private:
  const char* name_;
};

#define XMG_DEFINE_ERROR(Type)                                          \
  class Type : public Error {                                           \
   public:                                                              \
    explicit Type(const std::string& what) : Error(#Type, what) {}      \
  };

XMG_DEFINE_ERROR(InvalidCode)
XMG_DEFINE_ERROR(GridFull)
XMG_DEFINE_ERROR(InvalidEncoding)
XMG_DEFINE_ERROR(LayoutTooSmall)
XMG_DEFINE_ERROR(InvalidAction)
XMG_DEFINE_ERROR(UnknownEnvironment)
XMG_DEFINE_ERROR(ObjectPoolExhausted)
XMG_DEFINE_ERROR(InvalidConfig)
XMG_DEFINE_ERROR(IoError)
XMG_DEFINE_ERROR(FormatError)
XMG_DEFINE_ERROR(UnknownBenchmark)
XMG_DEFINE_ERROR(IndexOutOfRange)
XMG_DEFINE_ERROR(InvalidProportion)

#undef XMG_DEFINE_ERROR

}  // namespace xmg
