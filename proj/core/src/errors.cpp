#include "odm/errors.hpp"

namespace odm {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io: return "io";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Schema: return "schema";
        case ErrorKind::Spec: return "spec";
        case ErrorKind::Rule: return "rule";
        case ErrorKind::NotFound: return "not-found";
        case ErrorKind::Ambiguous: return "ambiguous";
        case ErrorKind::Collision: return "collision";
        case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

}  // namespace odm
