#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace epinet {

/// The 20 standard one-letter residue codes, in the canonical order used
/// for scale storage.
inline constexpr std::string_view kResidues = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr std::size_t kResidueCount = 20;
inline constexpr std::size_t kNoResidue = static_cast<std::size_t>(-1);

namespace detail {
constexpr std::array<std::size_t, 256> make_residue_index() {
    std::array<std::size_t, 256> t{};
    for (auto& v : t) v = kNoResidue;
    for (std::size_t i = 0; i < kResidues.size(); ++i) {
        t[static_cast<unsigned char>(kResidues[i])] = i;
    }
    return t;
}
inline constexpr auto kResidueIndex = make_residue_index();
} // namespace detail

/// Index of an uppercase residue code in kResidues, or kNoResidue.
constexpr std::size_t residue_index(char c) {
    return detail::kResidueIndex[static_cast<unsigned char>(c)];
}

constexpr bool is_residue(char c) { return residue_index(c) != kNoResidue; }

/// Uppercases and checks against the 20-letter alphabet.
/// Throws Error(EmptySequence) or IllegalResidueError(position, character);
/// X, B, Z, U, gaps and anything else non-standard are rejected.
std::string validate_sequence(std::string_view raw);

} // namespace epinet
