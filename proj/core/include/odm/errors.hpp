#pragma once

#include <stdexcept>
#include <string>

namespace odm {

enum class ErrorKind {
    Io,         // file system failures
    Parse,      // malformed input text
    Schema,     // dictionary invariant breach
    Spec,       // mapping spec invariant breach
    Rule,       // sharing rule invariant breach
    NotFound,   // missing element (group, pipeline, recipient, field)
    Ambiguous,  // conflicting data (duplicate pipeline order)
    Collision,  // two values mapping to one wide cell
    Usage,      // bad arguments
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace odm
