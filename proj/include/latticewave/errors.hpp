#pragma once

#include <stdexcept>
#include <string>

namespace lw {

// Exit-code families used by the CLI driver: validation errors map to 2,
// resource/convergence errors map to 3.
enum class ErrorKind { Validation, Resource };

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

struct SingularPoint : Error {
    explicit SingularPoint(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct SecPole : Error {
    explicit SecPole(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct ClassificationConflict : Error {
    explicit ClassificationConflict(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct NotConverged : Error {
    explicit NotConverged(const std::string& w) : Error(ErrorKind::Resource, w) {}
};
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& w) : Error(ErrorKind::Resource, w) {}
};
struct SyntaxError : Error {
    SyntaxError(const std::string& w, std::size_t pos)
        : Error(ErrorKind::Validation, w + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};
struct NegativeExponent : Error {
    NegativeExponent(const std::string& w, std::size_t pos)
        : Error(ErrorKind::Validation, w + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct TooLarge : Error {
    explicit TooLarge(const std::string& w) : Error(ErrorKind::Resource, w) {}
};
struct Degenerate : Error {
    explicit Degenerate(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct FaceNotFound : Error {
    explicit FaceNotFound(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct NotApplicable : Error {
    explicit NotApplicable(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct NotCritical : Error {
    explicit NotCritical(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct InsufficientRange : Error {
    explicit InsufficientRange(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct BoxTooSmall : Error {
    explicit BoxTooSmall(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct Blowup : Error {
    explicit Blowup(const std::string& w) : Error(ErrorKind::Resource, w) {}
};
struct IOError : Error {
    explicit IOError(const std::string& w) : Error(ErrorKind::Resource, w) {}
};

}  // namespace lw
