#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epinet {

enum class ErrorCode {
    EmptySequence,
    IllegalResidue,
    SequenceTooShort,
    NoCrossing,
    FileUnreadable,
    MissingColumn,
    UnexpectedColumn,
    DegenerateSplit,
    BadValue,
    LengthMismatch,
    ModelSchemaMismatch,
    ScaleTableError,
    InvalidArgument,
};

/// Coarse grouping used for process exit codes and C API status values.
enum class ErrorCategory { Usage, Data, Model };

ErrorCategory error_category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return error_category(code_); }

private:
    ErrorCode code_;
};

/// Raised when a sequence contains a character outside the 20 standard
/// one-letter residue codes. Position is the 0-based offset of the offender.
class IllegalResidueError : public Error {
public:
    IllegalResidueError(std::size_t position, char residue);

    std::size_t position() const noexcept { return position_; }
    char residue() const noexcept { return residue_; }

private:
    std::size_t position_;
    char residue_;
};

} // namespace epinet
