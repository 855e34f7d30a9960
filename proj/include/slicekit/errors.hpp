#pragma once

#include <stdexcept>
#include <string>

namespace slicekit {

enum class ErrorKind {
    InvalidArgument,
    ZeroPolynomial,
    UnsupportedDegree,
    NotAKnot,
    NotCyclic,
    UnsupportedModule,
    WrongGenus,
    NotRepresentable,
    NotMetabolic,
    RankMismatch,
    NotIsotropic,
    MissingBaseFact,
    UnsupportedLink,
    Schema,
};

const char* error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Unsupported module/link shapes and non-catalogued derivatives are refusals,
    // not malformed input; the CLI maps them to a distinct exit code.
    bool is_unsupported_shape() const noexcept {
        return kind_ == ErrorKind::NotCyclic || kind_ == ErrorKind::UnsupportedModule ||
               kind_ == ErrorKind::UnsupportedLink || kind_ == ErrorKind::NotRepresentable ||
               kind_ == ErrorKind::UnsupportedDegree;
    }

   private:
    ErrorKind kind_;
};

}  // namespace slicekit
