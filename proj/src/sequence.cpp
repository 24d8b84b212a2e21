#include "epinet/sequence.hpp"

#include <cctype>

#include "epinet/errors.hpp"

namespace epinet {

std::string validate_sequence(std::string_view raw) {
    if (raw.empty()) {
        throw Error(ErrorCode::EmptySequence, "empty sequence");
    }
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw[i])));
        if (!is_residue(c)) {
            throw IllegalResidueError(i, raw[i]);
        }
        out.push_back(c);
    }
    return out;
}

} // namespace epinet
