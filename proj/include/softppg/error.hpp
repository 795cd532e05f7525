#pragma once

#include <stdexcept>
#include <string>

namespace softppg {

// Exit-code aligned categories. The CLI maps them 1:1 onto process status.
enum class ErrorKind {
    invalid_argument,   // precondition on a value passed in code
    invalid_format,     // malformed input file
    invalid_config,     // configuration out of range or inconsistent
    insufficient_data,  // too few beats / intervals to compute something
    io,                 // filesystem failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Process exit status for an error kind: 2 format, 3 config, 4 insufficient data.
int exit_code(ErrorKind kind) noexcept;

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, ErrorKind kind, const std::string& what) {
    if (!ok) fail(kind, what);
}

}  // namespace softppg
