#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "epinet/scales.hpp"

namespace epinet {

/// Fixed feature order used everywhere: feature CSVs, model files,
/// standardizers, importance reports.
inline constexpr std::size_t kFeatureCount = 8;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "chou_fasman",       "emini",       "kolaskar_tongaonkar", "parker",
    "isoelectric_point", "aromaticity", "hydrophobicity",      "stability",
};

/// Mean over all contiguous windows of length min(window, len) of the mean
/// residue score inside each window. Exact on uniform sequences and
/// invariant under sequence reversal.
double windowed_mean_score(std::string_view peptide, const AminoAcidScale& scale,
                           std::size_t window);

// Peptide descriptors. chou_fasman / kolaskar_tongaonkar / parker use
// window 7; emini uses window 6 with the 0.37^(-w) normalization. All are
// defined for any non-empty validated peptide via the min(window, len)
// fallback.
double chou_fasman(std::string_view peptide, const ScaleRepository& scales);
double emini(std::string_view peptide, const ScaleRepository& scales);
double kolaskar_tongaonkar(std::string_view peptide, const ScaleRepository& scales);
// Parker's scale is a hydrophilicity scale (higher = more hydrophilic),
// even though the dataset column family calls the group "hydrophobicity".
double parker(std::string_view peptide, const ScaleRepository& scales);

// Protein descriptors.
double net_charge(std::string_view protein, double ph, const PkaSet& pka);
double isoelectric_point(std::string_view protein, const PkaSet& pka);
double aromaticity(std::string_view protein);
double gravy(std::string_view protein, const ScaleRepository& scales);
double instability_index(std::string_view protein, const PairScale& diwv);

/// All eight descriptors in kFeatureNames order: four peptide descriptors
/// from `peptide`, then isoelectric point, aromaticity, gravy and
/// instability index from `protein`.
std::array<double, kFeatureCount> descriptor_vector(std::string_view peptide,
                                                    std::string_view protein,
                                                    const ScaleRepository& scales);

} // namespace epinet
