#pragma once

#include <stdexcept>
#include <string>

namespace riskpath {

enum class ErrorKind {
    InvalidInput,  // schema or invariant violation in caller-supplied data
    Io,
    NoPath,
    InvalidPath,   // node sequence that is not a connected path in the graph
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace riskpath
