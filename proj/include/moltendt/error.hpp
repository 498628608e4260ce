#pragma once

#include <stdexcept>
#include <string>

namespace moltendt {

// validation errors map to CLI exit code 1, invariant failures to 2
enum class Severity { validation, invariant };

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg, Severity sev = Severity::validation)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)), sev_(sev) {}
    const std::string& kind() const noexcept { return kind_; }
    Severity severity() const noexcept { return sev_; }

private:
    std::string kind_;
    Severity sev_;
};

inline Error validation_error(const std::string& kind, const std::string& msg) {
    return Error(kind, msg, Severity::validation);
}

inline Error invariant_error(const std::string& kind, const std::string& msg) {
    return Error(kind, msg, Severity::invariant);
}

} // namespace moltendt
