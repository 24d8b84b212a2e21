// Deterministic synthetic epitope corpus generator. Emits the standard
// 14-column dataset CSV with peptides cut from generated proteins and
// descriptor columns computed through the library, so passthrough and
// recompute modes agree bit for bit.
//
// Labels are drawn from a logistic model over the standardized
// descriptors, weighted towards the protein-level ones. The logistic
// scale and intercept are calibrated by bisection so the corpus has a
// fixed positive fraction and a fixed Bayes accuracy, which puts a known
// ceiling on any classifier trained on it.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "epinet.h"

namespace {

constexpr size_t kRows = 14907;
constexpr double kPositiveFraction = 0.272;
constexpr double kBayesAccuracy = 0.84;
constexpr int kFeatures = EPN_FEATURE_COUNT;

// Peptide descriptors get small weights, protein descriptors large ones.
constexpr double kWeights[kFeatures] = {0.25, 0.25, 0.25, 0.25, 1.0, 1.0, -1.0, -1.0};

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(uint64_t seed) : engine(seed) {}

    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, bound) via 128-bit multiply.
    uint64_t below(uint64_t bound) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(engine()) * bound) >> 64);
    }
};

// Swiss-Prot style background composition, one weight per residue of
// ACDEFGHIKLMNPQRSTVWY.
constexpr double kComposition[20] = {
    8.25, 1.37, 5.45, 6.75, 3.86, 7.07, 2.27, 5.96, 5.84, 9.66,
    2.42, 4.06, 4.70, 3.93, 5.53, 6.56, 5.34, 6.87, 1.08, 2.92,
};

char sample_residue(Rng& rng, const double* cumulative, double total) {
    static const char* residues = "ACDEFGHIKLMNPQRSTVWY";
    const double u = rng.uniform() * total;
    for (int i = 0; i < 20; ++i) {
        if (u < cumulative[i]) return residues[i];
    }
    return residues[19];
}

struct Row {
    std::string protein_id;
    size_t protein_index;
    size_t start;
    size_t end;
    std::string peptide;
    double features[kFeatures];
    int target = 0;
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Intercept that hits the requested mean probability at a fixed scale.
double solve_intercept(const std::vector<double>& z, double scale, double want_mean) {
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 80; ++it) {
        const double b = 0.5 * (lo + hi);
        double mean = 0.0;
        for (double zi : z) mean += sigmoid(scale * zi + b);
        mean /= static_cast<double>(z.size());
        (mean < want_mean ? lo : hi) = b;
    }
    return 0.5 * (lo + hi);
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3 || argc > 4) {
        std::fprintf(stderr, "usage: datagen <out_csv> <scales_dir> [seed]\n");
        return 2;
    }
    const std::string out_path = argv[1];
    const uint64_t seed = argc == 4 ? std::strtoull(argv[3], nullptr, 10) : 1u;

    if (epn_scales_load(argv[2]) != EPN_OK) {
        std::fprintf(stderr, "error: %s\n", epn_last_error());
        return 3;
    }

    double cumulative[20];
    double total = 0.0;
    for (int i = 0; i < 20; ++i) {
        total += kComposition[i];
        cumulative[i] = total;
    }

    Rng rng(seed);
    std::vector<std::string> proteins;
    std::vector<Row> rows;
    rows.reserve(kRows);

    while (rows.size() < kRows) {
        const size_t length = 50 + rng.below(551);
        std::string protein(length, 'A');
        for (auto& c : protein) c = sample_residue(rng, cumulative, total);
        proteins.push_back(protein);

        char id[16];
        std::snprintf(id, sizeof(id), "SYN%04zu", proteins.size());

        const size_t peptides = 8 + rng.below(17);
        for (size_t p = 0; p < peptides && rows.size() < kRows; ++p) {
            const size_t max_len = length < 25 ? length : 25;
            const size_t len = 5 + rng.below(max_len - 4);
            const size_t start = 1 + rng.below(length - len + 1);

            Row row;
            row.protein_id = id;
            row.protein_index = proteins.size() - 1;
            row.start = start;
            row.end = start + len - 1;
            row.peptide = protein.substr(start - 1, len);
            if (epn_descriptors(row.peptide.c_str(), protein.c_str(), row.features) !=
                EPN_OK) {
                std::fprintf(stderr, "error: %s\n", epn_last_error());
                return 3;
            }
            rows.push_back(std::move(row));
        }
    }

    // Standardize, then calibrate the logistic model: the intercept sets
    // the positive fraction, the scale sets the Bayes accuracy.
    double mean[kFeatures] = {0};
    double sd[kFeatures] = {0};
    for (const Row& row : rows)
        for (int f = 0; f < kFeatures; ++f) mean[f] += row.features[f];
    for (int f = 0; f < kFeatures; ++f) mean[f] /= static_cast<double>(rows.size());
    for (const Row& row : rows)
        for (int f = 0; f < kFeatures; ++f) {
            const double d = row.features[f] - mean[f];
            sd[f] += d * d;
        }
    for (int f = 0; f < kFeatures; ++f) {
        sd[f] = std::sqrt(sd[f] / static_cast<double>(rows.size()));
        if (sd[f] == 0.0) sd[f] = 1.0;
    }

    std::vector<double> z(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        double acc = 0.0;
        for (int f = 0; f < kFeatures; ++f)
            acc += kWeights[f] * (rows[i].features[f] - mean[f]) / sd[f];
        z[i] = acc;
    }

    double lo = 0.01, hi = 50.0;
    double scale = 1.0, intercept = 0.0;
    for (int it = 0; it < 60; ++it) {
        scale = 0.5 * (lo + hi);
        intercept = solve_intercept(z, scale, kPositiveFraction);
        double bayes = 0.0;
        for (double zi : z) {
            const double p = sigmoid(scale * zi + intercept);
            bayes += p > 0.5 ? p : 1.0 - p;
        }
        bayes /= static_cast<double>(z.size());
        (bayes < kBayesAccuracy ? lo : hi) = scale;
    }

    size_t positives = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        const double p = sigmoid(scale * z[i] + intercept);
        rows[i].target = rng.uniform() < p ? 1 : 0;
        positives += static_cast<size_t>(rows[i].target);
    }

    std::string csv;
    csv.reserve(rows.size() * 700);
    csv += "parent_protein_id,protein_seq,start_position,end_position,peptide_seq,"
           "chou_fasman,emini,kolaskar_tongaonkar,parker,isoelectric_point,"
           "aromaticity,hydrophobicity,stability,target\n";
    char num[64];
    for (const Row& row : rows) {
        csv += row.protein_id;
        csv += ',';
        csv += proteins[row.protein_index];
        csv += ',';
        std::snprintf(num, sizeof(num), "%zu,%zu,", row.start, row.end);
        csv += num;
        csv += row.peptide;
        for (int f = 0; f < kFeatures; ++f) {
            csv += ',';
            csv += fmt17(row.features[f]);
        }
        csv += row.target ? ",1\n" : ",0\n";
    }

    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (!f || std::fwrite(csv.data(), 1, csv.size(), f) != csv.size() ||
        std::fclose(f) != 0) {
        std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
        return 3;
    }

    std::printf("wrote %s: %zu rows, %zu proteins, %.4f positive, scale %.4f\n",
                out_path.c_str(), rows.size(), proteins.size(),
                static_cast<double>(positives) / static_cast<double>(rows.size()), scale);
    return 0;
}
