#pragma once

#include <stdexcept>
#include <string>

namespace cbplab {

// Error taxonomy. The CLI maps these onto exit codes:
//   validation_error / domain_error / bracket_error -> 2
//   precision_error / accuracy_error               -> 3
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

class bracket_error : public std::runtime_error {
public:
    explicit bracket_error(const std::string& msg) : std::runtime_error(msg) {}
};

class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature non-convergence; carries the partial value and its error estimate.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& msg, double partial, double err)
        : std::runtime_error(msg), partial_value(partial), error_estimate(err) {}
    double partial_value;
    double error_estimate;
};

}  // namespace cbplab
