#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "epinet/descriptors.hpp"
#include "epinet/errors.hpp"
#include "epinet/rng.hpp"
#include "helpers.hpp"

using namespace epinet;

namespace {

std::string random_sequence(Rng& rng, std::size_t min_len, std::size_t max_len) {
    const std::size_t len = min_len + rng.uniform_below(max_len - min_len + 1);
    std::string s(len, 'A');
    for (auto& c : s) c = kResidues[rng.uniform_below(kResidueCount)];
    return s;
}

// Plain-summation reimplementation of the windowed mean of means.
double naive_windowed_mean(const std::string& seq, const AminoAcidScale& scale,
                           std::size_t window) {
    const std::size_t w = std::min(window, seq.size());
    double outer = 0.0;
    std::size_t count = 0;
    for (std::size_t start = 0; start + w <= seq.size(); ++start) {
        double inner = 0.0;
        for (std::size_t k = 0; k < w; ++k) inner += scale.at(seq[start + k]);
        outer += inner / static_cast<double>(w);
        ++count;
    }
    return outer / static_cast<double>(count);
}

double naive_emini(const std::string& seq, const AminoAcidScale& scale) {
    const std::size_t w = std::min<std::size_t>(6, seq.size());
    double outer = 0.0;
    std::size_t count = 0;
    for (std::size_t start = 0; start + w <= seq.size(); ++start) {
        double product = std::pow(0.37, -static_cast<double>(w));
        for (std::size_t k = 0; k < w; ++k) product *= scale.at(seq[start + k]);
        outer += product;
        ++count;
    }
    return outer / static_cast<double>(count);
}

// Independent charge model: explicit group enumeration.
double naive_net_charge(const std::string& seq, double ph, const PkaSet& pka) {
    auto positive = [&](double pka_value) { return 1.0 / (1.0 + std::pow(10.0, ph - pka_value)); };
    auto negative = [&](double pka_value) { return -1.0 / (1.0 + std::pow(10.0, pka_value - ph)); };
    double charge = positive(pka.n_terminus()) + negative(pka.c_terminus());
    for (char c : seq) {
        switch (c) {
        case 'H': case 'K': case 'R':
            charge += positive(pka.side_chain(c));
            break;
        case 'D': case 'E': case 'C': case 'Y':
            charge += negative(pka.side_chain(c));
            break;
        default:
            break;
        }
    }
    return charge;
}

// Relative against magnitude, absolute once values shrink below 1 (window
// means of signed scales can cancel towards zero).
double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

TEST_CASE("windowed peptide descriptors match a brute-force oracle") {
    const auto& repo = epitest::scales();
    Rng rng(101);
    for (int i = 0; i < 50; ++i) {
        const std::string seq = random_sequence(rng, 1, 40);
        CHECK(rel_err(chou_fasman(seq, repo), naive_windowed_mean(seq, repo.chou_fasman, 7)) < 1e-9);
        CHECK(rel_err(kolaskar_tongaonkar(seq, repo),
                      naive_windowed_mean(seq, repo.kolaskar_tongaonkar, 7)) < 1e-9);
        CHECK(rel_err(parker(seq, repo), naive_windowed_mean(seq, repo.parker, 7)) < 1e-9);
        CHECK(rel_err(emini(seq, repo), naive_emini(seq, repo.emini)) < 1e-9);
    }
}

TEST_CASE("uniform sequences reproduce the single-residue value exactly") {
    const auto& repo = epitest::scales();
    for (char c : std::string(kResidues)) {
        for (std::size_t len : {1, 2, 6, 7, 8, 13, 30}) {
            const std::string seq(len, c);
            CHECK(chou_fasman(seq, repo) == repo.chou_fasman.at(c));
            CHECK(kolaskar_tongaonkar(seq, repo) == repo.kolaskar_tongaonkar.at(c));
            CHECK(parker(seq, repo) == repo.parker.at(c));
            CHECK(gravy(seq, repo) == repo.kyte_doolittle.at(c));

            // Uniform window product: repeated multiplication closed form.
            const std::size_t w = std::min<std::size_t>(6, len);
            double expected = 1.0;
            for (std::size_t k = 0; k < w; ++k) expected *= repo.emini.at(c) / 0.37;
            CHECK(emini(seq, repo) == expected);
        }
    }
}

TEST_CASE("peptide descriptors are invariant under sequence reversal") {
    const auto& repo = epitest::scales();
    Rng rng(202);
    for (int i = 0; i < 50; ++i) {
        const std::string seq = random_sequence(rng, 1, 40);
        std::string rev(seq.rbegin(), seq.rend());
        CHECK(chou_fasman(seq, repo) == chou_fasman(rev, repo));
        CHECK(kolaskar_tongaonkar(seq, repo) == kolaskar_tongaonkar(rev, repo));
        CHECK(parker(seq, repo) == parker(rev, repo));
        CHECK(gravy(seq, repo) == gravy(rev, repo));
        // The window mean is exactly symmetric; the window product only
        // commutes up to rounding.
        CHECK(rel_err(emini(seq, repo), emini(rev, repo)) < 1e-12);
    }
}

TEST_CASE("windowed_mean_score validates its arguments") {
    const auto& repo = epitest::scales();
    CHECK_THROWS_AS(windowed_mean_score("ACD", repo.parker, 0), Error);
    CHECK_THROWS_AS(windowed_mean_score("", repo.parker, 7), Error);
    CHECK_THROWS_AS(windowed_mean_score("AC!D", repo.parker, 7), IllegalResidueError);
}

TEST_CASE("sequences shorter than the window fall back to one full-length window") {
    const auto& repo = epitest::scales();
    const std::string seq = "ACD";
    double mean = 0.0;
    for (char c : seq) mean += repo.parker.at(c);
    mean /= 3.0;
    CHECK(rel_err(parker(seq, repo), mean) < 1e-15);
    CHECK(windowed_mean_score(seq, repo.parker, 7) == windowed_mean_score(seq, repo.parker, 3));
}

TEST_CASE("net charge matches the group-enumeration oracle") {
    const auto& repo = epitest::scales();
    Rng rng(303);
    for (int i = 0; i < 50; ++i) {
        const std::string seq = random_sequence(rng, 1, 120);
        const double ph = 14.0 * rng.uniform_double();
        CHECK(std::abs(net_charge(seq, ph, repo.pka) - naive_net_charge(seq, ph, repo.pka)) <
              1e-12);
    }
}

TEST_CASE("net charge is positive at pH 0, negative at pH 14, decreasing in pH") {
    const auto& repo = epitest::scales();
    Rng rng(304);
    for (int i = 0; i < 20; ++i) {
        const std::string seq = random_sequence(rng, 5, 80);
        CHECK(net_charge(seq, 0.0, repo.pka) > 0.0);
        CHECK(net_charge(seq, 14.0, repo.pka) < 0.0);
        double prev = net_charge(seq, 0.0, repo.pka);
        for (double ph = 1.0; ph <= 14.0; ph += 1.0) {
            const double cur = net_charge(seq, ph, repo.pka);
            CHECK(cur < prev);
            prev = cur;
        }
    }
    CHECK_THROWS_AS(net_charge("ACD", -0.1, repo.pka), Error);
    CHECK_THROWS_AS(net_charge("ACD", 14.1, repo.pka), Error);
}

TEST_CASE("isoelectric point agrees with a finer independent bisection") {
    const auto& repo = epitest::scales();
    Rng rng(404);
    for (int i = 0; i < 50; ++i) {
        const std::string seq = random_sequence(rng, 2, 200);
        const double pi = isoelectric_point(seq, repo.pka);

        double lo = 0.0, hi = 14.0;
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            (net_charge(seq, mid, repo.pka) > 0.0 ? lo : hi) = mid;
        }
        const double fine = 0.5 * (lo + hi);

        // Both brackets contain the crossing; widths 14/2^11 and 1e-6.
        CHECK(std::abs(pi - fine) < 0.5 * (14.0 / 2048.0) + 1e-6);
        CHECK(std::abs(net_charge(seq, pi, repo.pka)) < 0.05);
    }
}

TEST_CASE("adding a basic residue raises the isoelectric point") {
    const auto& repo = epitest::scales();
    const std::string base = "ACDEFGHILMNPQSTVWY";
    CHECK(isoelectric_point(base + "K", repo.pka) >= isoelectric_point(base, repo.pka));
    CHECK(isoelectric_point(base + "D", repo.pka) <= isoelectric_point(base, repo.pka));
}

TEST_CASE("a charge curve that never crosses zero is reported") {
    // Acid pKa values pushed to the floor make an all-D peptide negative
    // over the whole pH range.
    const std::vector<std::pair<std::string, double>> entries = {
        {"n_terminus", 9.0}, {"c_terminus", 0.01}, {"D", 0.01}, {"E", 0.01}, {"C", 8.0},
        {"Y", 10.0},         {"H", 6.0},           {"K", 10.5}, {"R", 12.0},
    };
    const PkaSet floor_pka("", entries);
    try {
        isoelectric_point("DDDD", floor_pka);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoCrossing);
    }
}

TEST_CASE("aromaticity counts F, W and Y") {
    CHECK(aromaticity("FWY") == 1.0);
    CHECK(aromaticity("ACDG") == 0.0);
    CHECK(aromaticity("FARW") == 0.5);
    CHECK_THROWS_AS(aromaticity("f"), IllegalResidueError); // wants canonical input
}

TEST_CASE("gravy matches hand arithmetic") {
    const auto& repo = epitest::scales();
    CHECK(std::abs(gravy("ARN", repo) - (1.8 - 4.5 - 3.5) / 3.0) < 1e-15);
    CHECK(gravy("AAAA", repo) == 1.8);
}

TEST_CASE("instability index is the scaled dipeptide weight sum") {
    const auto& repo = epitest::scales();
    Rng rng(505);
    for (int i = 0; i < 30; ++i) {
        const std::string seq = random_sequence(rng, 2, 60);
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < seq.size(); ++k) sum += repo.diwv.at(seq[k], seq[k + 1]);
        const double expected = 10.0 / static_cast<double>(seq.size()) * sum;
        CHECK(rel_err(instability_index(seq, repo.diwv), expected) < 1e-12);
    }
    CHECK(instability_index("GG", repo.diwv) == 5.0 * repo.diwv.at('G', 'G'));
    CHECK_THROWS_AS(instability_index("G", repo.diwv), Error);
}

TEST_CASE("instability index is linear in the weight table") {
    const auto& repo = epitest::scales();
    std::vector<std::pair<std::string, double>> entries;
    std::vector<std::pair<std::string, double>> doubled;
    for (char a : std::string(kResidues)) {
        for (char b : std::string(kResidues)) {
            const std::string key{a, b};
            const double v = repo.diwv.at(a, b);
            entries.emplace_back(key, v);
            doubled.emplace_back(key, 2.0 * v);
        }
    }
    const PairScale one("w", "", entries);
    const PairScale two("w2", "", doubled);
    Rng rng(606);
    for (int i = 0; i < 20; ++i) {
        const std::string seq = random_sequence(rng, 2, 50);
        CHECK(instability_index(seq, two) == 2.0 * instability_index(seq, one));
    }
}

TEST_CASE("descriptor_vector packs the eight features in the fixed order") {
    const auto& repo = epitest::scales();
    const std::string peptide = "LLDFVRFMGV";
    const std::string protein = "MKLLDFVRFMGVSEYDPKTACWHNQIGR";
    const auto v = descriptor_vector(peptide, protein, repo);
    CHECK(v[0] == chou_fasman(peptide, repo));
    CHECK(v[1] == emini(peptide, repo));
    CHECK(v[2] == kolaskar_tongaonkar(peptide, repo));
    CHECK(v[3] == parker(peptide, repo));
    CHECK(v[4] == isoelectric_point(protein, repo.pka));
    CHECK(v[5] == aromaticity(protein));
    CHECK(v[6] == gravy(protein, repo));
    CHECK(v[7] == instability_index(protein, repo.diwv));
}
