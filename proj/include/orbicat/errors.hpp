#pragma once
#include <stdexcept>
#include <string>

namespace orbicat {

// Named failure carrying the offending quantity, if any.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg, double residual = -1.0)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)), residual_(residual) {}
    const std::string& kind() const { return kind_; }
    double residual() const { return residual_; }
    // 2 for input/parse problems, 1 for failed checks
    int exit_code() const;

private:
    std::string kind_;
    double residual_;
};

}  // namespace orbicat
