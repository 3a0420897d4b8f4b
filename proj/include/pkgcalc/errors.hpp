#pragma once

#include <stdexcept>
#include <string>

namespace pkgcalc {

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

struct LimitExceeded : std::runtime_error {
    explicit LimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line(line) {}
    int line;
};

struct StackError : std::runtime_error {
    StackError(std::string rule_name, const std::string& what)
        : std::runtime_error(rule_name + ": " + what), rule(std::move(rule_name)) {}
    std::string rule;
};

struct EmitError : std::runtime_error {
    explicit EmitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pkgcalc
