#include "epinet/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "epinet/errors.hpp"

namespace epinet {
namespace {

constexpr std::size_t kProfileWindow = 7; // chou_fasman, kolaskar_tongaonkar, parker
constexpr std::size_t kSurfaceWindow = 6; // emini
constexpr double kSurfaceCenter = 0.37;
constexpr double kPhTolerance = 0.01;
constexpr double kChargeTolerance = 0.01;

void check_residues(std::string_view seq) {
    if (seq.empty()) {
        throw Error(ErrorCode::EmptySequence, "empty sequence");
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!is_residue(seq[i])) {
            throw IllegalResidueError(i, seq[i]);
        }
    }
}

std::vector<double> residue_scores(std::string_view seq, const AminoAcidScale& scale) {
    check_residues(seq);
    std::vector<double> scores(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        scores[i] = scale[seq[i]];
    }
    return scores;
}

// Running mean scanned from both ends, then averaged. A running mean is
// exact on constant input (the update term is exactly zero), and pairing
// the two scan directions makes the result invariant under reversal
// because IEEE addition commutes.
double symmetric_mean(const double* xs, std::size_t n) {
    double fwd = 0.0;
    double rev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<double>(i + 1);
        fwd += (xs[i] - fwd) / k;
        rev += (xs[n - 1 - i] - rev) / k;
    }
    return 0.5 * (fwd + rev);
}

double mean_over_windows(const std::vector<double>& per_window) {
    return symmetric_mean(per_window.data(), per_window.size());
}

} // namespace

double windowed_mean_score(std::string_view peptide, const AminoAcidScale& scale,
                           std::size_t window) {
    if (window == 0) {
        throw Error(ErrorCode::InvalidArgument, "window must be at least 1");
    }
    const std::vector<double> scores = residue_scores(peptide, scale);
    const std::size_t n = scores.size();
    const std::size_t w = std::min(window, n);
    std::vector<double> means(n - w + 1);
    for (std::size_t j = 0; j < means.size(); ++j) {
        means[j] = symmetric_mean(scores.data() + j, w);
    }
    return mean_over_windows(means);
}

double chou_fasman(std::string_view peptide, const ScaleRepository& scales) {
    return windowed_mean_score(peptide, scales.chou_fasman, kProfileWindow);
}

double kolaskar_tongaonkar(std::string_view peptide, const ScaleRepository& scales) {
    return windowed_mean_score(peptide, scales.kolaskar_tongaonkar, kProfileWindow);
}

double parker(std::string_view peptide, const ScaleRepository& scales) {
    return windowed_mean_score(peptide, scales.parker, kProfileWindow);
}

double emini(std::string_view peptide, const ScaleRepository& scales) {
    const std::vector<double> scores = residue_scores(peptide, scales.emini);
    const std::size_t n = scores.size();
    const std::size_t w = std::min(kSurfaceWindow, n);
    std::vector<double> products(n - w + 1);
    for (std::size_t j = 0; j < products.size(); ++j) {
        double p = 1.0;
        for (std::size_t k = j; k < j + w; ++k) {
            p *= scores[k] / kSurfaceCenter;
        }
        products[j] = p;
    }
    return mean_over_windows(products);
}

double net_charge(std::string_view protein, double ph, const PkaSet& pka) {
    if (!(ph >= 0.0 && ph <= 14.0)) {
        throw Error(ErrorCode::InvalidArgument, "pH must lie in [0, 14]");
    }
    check_residues(protein);

    std::array<double, kResidueCount> counts{};
    for (const char c : protein) {
        counts[residue_index(c)] += 1.0;
    }

    const auto protonated = [ph](double pk) { return 1.0 / (1.0 + std::pow(10.0, ph - pk)); };
    const auto deprotonated = [ph](double pk) { return -1.0 / (1.0 + std::pow(10.0, pk - ph)); };

    double charge = protonated(pka.n_terminus()) + deprotonated(pka.c_terminus());
    for (const char r : {'H', 'K', 'R'}) {
        charge += counts[residue_index(r)] * protonated(pka.side_chain(r));
    }
    for (const char r : {'D', 'E', 'C', 'Y'}) {
        charge += counts[residue_index(r)] * deprotonated(pka.side_chain(r));
    }
    return charge;
}

double isoelectric_point(std::string_view protein, const PkaSet& pka) {
    double lo = 0.0;
    double hi = 14.0;
    double charge_lo = net_charge(protein, lo, pka);
    const double charge_hi = net_charge(protein, hi, pka);
    if (charge_lo == 0.0) return lo;
    if (charge_hi == 0.0) return hi;
    if ((charge_lo > 0.0) == (charge_hi > 0.0)) {
        throw Error(ErrorCode::NoCrossing,
                    "net charge does not change sign over pH [0, 14]");
    }
    // Bisect to the pH tolerance, then keep halving until the measured
    // charge at the returned point is negligible too: long sequences have
    // steep charge curves, so a width bound alone does not bound the
    // residual charge. The bracket guard stops at double resolution.
    double mid = 0.5 * (lo + hi);
    double charge_mid = net_charge(protein, mid, pka);
    while ((hi - lo > kPhTolerance || std::abs(charge_mid) >= kChargeTolerance) &&
           lo < mid && mid < hi) {
        if (charge_mid == 0.0) return mid;
        if ((charge_mid > 0.0) == (charge_lo > 0.0)) {
            lo = mid;
            charge_lo = charge_mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        charge_mid = net_charge(protein, mid, pka);
    }
    return mid;
}

double aromaticity(std::string_view protein) {
    check_residues(protein);
    std::size_t aromatic = 0;
    for (const char c : protein) {
        if (c == 'F' || c == 'W' || c == 'Y') ++aromatic;
    }
    return static_cast<double>(aromatic) / static_cast<double>(protein.size());
}

double gravy(std::string_view protein, const ScaleRepository& scales) {
    const std::vector<double> scores = residue_scores(protein, scales.kyte_doolittle);
    return symmetric_mean(scores.data(), scores.size());
}

double instability_index(std::string_view protein, const PairScale& diwv) {
    check_residues(protein);
    if (protein.size() < 2) {
        throw Error(ErrorCode::SequenceTooShort,
                    "instability index needs at least 2 residues, got " +
                        std::to_string(protein.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < protein.size(); ++i) {
        sum += diwv.at(protein[i], protein[i + 1]);
    }
    return (10.0 / static_cast<double>(protein.size())) * sum;
}

std::array<double, kFeatureCount> descriptor_vector(std::string_view peptide,
                                                    std::string_view protein,
                                                    const ScaleRepository& scales) {
    return {
        chou_fasman(peptide, scales),
        emini(peptide, scales),
        kolaskar_tongaonkar(peptide, scales),
        parker(peptide, scales),
        isoelectric_point(protein, scales.pka),
        aromaticity(protein),
        gravy(protein, scales),
        instability_index(protein, scales.diwv),
    };
}

} // namespace epinet
