#pragma once

#include <stdexcept>
#include <string>

namespace ecs {

// Base class of every error thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct divide_by_zero : error {
    divide_by_zero() : error("division by zero") {}
};

// Exact division has no quotient within the iteration bound.
struct non_exact : error {
    non_exact() : error("division is not exact") {}
};

struct not_monomial : error {
    not_monomial() : error("not a coefficient-1 monomial") {}
};

struct not_pure_x : error {
    not_pure_x() : error("sum carries a nonzero y or z exponent") {}
};

struct not_multiset : error {
    not_multiset() : error("coefficients do not form a grade multiset") {}
};

struct budget_exceeded : error {
    explicit budget_exceeded(const std::string& detail)
        : error("budget exceeded: " + detail) {}
};

// The input series is not the exterior critical series of any barcode.
// `stage` names the pipeline step whose consistency check failed.
struct malformed_ecs : error {
    std::string stage;
    malformed_ecs(std::string stage_, const std::string& detail)
        : error("malformed ECS at stage '" + stage_ + "': " + detail),
          stage(std::move(stage_)) {}
};

struct invalid_module : error {
    using error::error;
};

struct empty_interval : error {
    empty_interval() : error("interval requires a < b") {}
};

struct axis_mismatch : error {
    using error::error;
};

struct negative_multiplicity : error {
    using error::error;
};

// A bar with lifespan <= 0, or a file-level invariant violation.
struct invalid_input : error {
    using error::error;
};

// Malformed JSON document or rational literal.
struct parse_error : error {
    using error::error;
};

}  // namespace ecs
