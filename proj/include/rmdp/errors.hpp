#pragma once

#include <stdexcept>
#include <string>

namespace rmdp {

/// Input model failed validation.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve or other numerical step failed beyond tolerance.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative method hit its iteration cap before meeting its stopping rule.
class iteration_limit_error : public std::runtime_error {
public:
    iteration_limit_error(const std::string& what, double best_so_far)
        : std::runtime_error(what), best_so_far(best_so_far) {}
    double best_so_far;
};

/// A solver exceeded its wall-clock deadline.
class timeout_error : public std::runtime_error {
public:
    explicit timeout_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rmdp
