#ifndef SRLASER_ERRORS_HPP
#define SRLASER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace srlaser {

struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// w + gamma = 0: the pump factor (w-gamma)/(w+gamma) is undefined.
struct DegenerateRates : std::domain_error {
    using std::domain_error::domain_error;
};

// Discriminant of the cooperativity self-consistency equation is negative;
// no real branch exists (strong-interaction no-lasing regime).
struct ComplexBranches : std::domain_error {
    using std::domain_error::domain_error;
};

struct BelowThreshold : std::domain_error {
    using std::domain_error::domain_error;
};

struct AboveThreshold : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotStationary : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StepFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeQ : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DegenerateNullSpace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CutoffExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(const std::string& msg, int line_) : std::runtime_error(msg), line(line_) {}
};

struct UnknownKey : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingPayload : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace srlaser

#endif
