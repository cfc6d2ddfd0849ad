#include "resofit/errors.hpp"

namespace resofit {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::config: return "config";
        case ErrorCode::parse: return "parse";
        case ErrorCode::fit: return "fit";
        case ErrorCode::io: return "io";
        case ErrorCode::domain: return "domain";
    }
    return "unknown";
}

} // namespace resofit
