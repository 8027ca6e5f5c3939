// Exception types thrown by the core library. The C API maps each to a
// status code.
#pragma once

#include <stdexcept>
#include <string>

namespace parawt
{

enum class ErrorKind
{
    parameter,
    domain,
    degenerate,
    shape,
    validation,
    structural,
    io,
    config,
};

class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, std::string const& what)
        : std::runtime_error(what), kind_(kind)
    {
    }
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string const& what)
{
    throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, std::string const& what)
{
    if (!cond)
        fail(kind, what);
}

}  // namespace parawt
