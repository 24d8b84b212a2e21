#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epinet/sequence.hpp"

namespace epinet {

/// One published per-residue table: exactly one finite value per standard
/// residue. Lookup of a non-standard code throws.
class AminoAcidScale {
public:
    AminoAcidScale() = default;
    AminoAcidScale(std::string name, std::string provenance,
                   const std::vector<std::pair<char, double>>& entries);

    double at(char residue) const;

    /// Unchecked lookup; residue must satisfy is_residue().
    double operator[](char residue) const { return values_[residue_index(residue)]; }

    const std::string& name() const { return name_; }
    const std::string& provenance() const { return provenance_; }

private:
    std::string name_;
    std::string provenance_;
    std::array<double, kResidueCount> values_{};
};

/// Ordered dipeptide weights: exactly 400 finite values, one per (x, y).
class PairScale {
public:
    PairScale() = default;
    PairScale(std::string name, std::string provenance,
              const std::vector<std::pair<std::string, double>>& entries);

    double at(char x, char y) const;

    const std::string& name() const { return name_; }
    const std::string& provenance() const { return provenance_; }

private:
    std::string name_;
    std::string provenance_;
    std::array<double, kResidueCount * kResidueCount> values_{};
};

/// Dissociation constants for the ionizable groups: both termini plus the
/// side chains of D, E, C, Y, H, K, R. All values must lie in (0, 14).
class PkaSet {
public:
    static constexpr std::string_view kSideChains = "DECYHKR";

    PkaSet() = default;
    PkaSet(std::string provenance,
           const std::vector<std::pair<std::string, double>>& entries);

    double n_terminus() const { return n_terminus_; }
    double c_terminus() const { return c_terminus_; }
    double side_chain(char residue) const;
    static bool has_side_chain(char residue) {
        return kSideChains.find(residue) != std::string_view::npos;
    }

    const std::string& provenance() const { return provenance_; }

private:
    std::string provenance_;
    double n_terminus_ = 0.0;
    double c_terminus_ = 0.0;
    std::array<double, kResidueCount> side_{};
};

/// All tables the descriptors need, loaded from one directory of
/// `key value` text files. Each file's raw bytes are verified against a
/// compiled-in FNV-1a64 checksum before parsing, so silent edits or
/// corruption fail loudly. Immutable after load; safe to share across
/// threads.
struct ScaleRepository {
    AminoAcidScale chou_fasman;
    AminoAcidScale emini;
    AminoAcidScale kolaskar_tongaonkar;
    AminoAcidScale parker;
    AminoAcidScale kyte_doolittle;
    PairScale diwv;
    PkaSet pka;

    /// Throws Error(FileUnreadable) or Error(ScaleTableError).
    static ScaleRepository load(const std::string& dir);
};

} // namespace epinet
