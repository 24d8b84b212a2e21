#include "epinet/errors.hpp"

namespace epinet {

ErrorCategory error_category(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument:
        return ErrorCategory::Usage;
    case ErrorCode::ModelSchemaMismatch:
        return ErrorCategory::Model;
    default:
        return ErrorCategory::Data;
    }
}

IllegalResidueError::IllegalResidueError(std::size_t position, char residue)
    : Error(ErrorCode::IllegalResidue,
            "illegal residue '" + std::string(1, residue) + "' at position " +
                std::to_string(position)),
      position_(position),
      residue_(residue) {}

} // namespace epinet
