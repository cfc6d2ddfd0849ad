#ifndef RESOFIT_ERRORS_HPP
#define RESOFIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace resofit {

// Error categories, aligned with the CLI exit codes documented in the README.
enum class ErrorCode {
    config,  // invalid options or configuration (exit 2)
    parse,   // malformed input document (exit 3)
    fit,     // a fit stage failed to converge or produced invalid output (exit 4)
    io,      // file could not be read or written (exit 5)
    domain,  // argument outside the mathematical domain of an operation (exit 2)
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string module, const std::string& message)
        : std::runtime_error("[" + module + "] " + message),
          code_(code),
          module_(std::move(module)),
          message_(message) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string module_;
    std::string message_;
};

} // namespace resofit

#endif
