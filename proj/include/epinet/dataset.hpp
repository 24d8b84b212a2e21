#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "epinet/descriptors.hpp"

namespace epinet {

/// One row of the epitope CSV. Sequences are stored canonicalized
/// (uppercase, validated); `features` holds the eight precomputed columns
/// in kFeatureNames order.
struct EpitopeRecord {
    std::string parent_protein_id;
    std::string protein_seq;
    long long start_position = 0; // 1-based, inclusive
    long long end_position = 0;   // 1-based, inclusive
    std::string peptide_seq;
    std::array<double, kFeatureCount> features{};
    int target = 0;
};

struct FeatureVector {
    std::array<double, kFeatureCount> x{};
    int y = 0;
};

struct RowRejection {
    std::size_t row; // 1-based data row number (header not counted)
    std::string reason;
};

struct IngestReport {
    std::size_t loaded = 0;
    std::vector<RowRejection> rejections;
    std::size_t span_mismatches = 0;

    std::size_t rejected() const { return rejections.size(); }
    std::string to_text() const;
};

struct LoadOptions {
    /// Default: an illegal residue aborts the whole load. When set, such
    /// rows are rejected with a warning in the report instead.
    bool skip_illegal_residues = false;
};

struct LoadResult {
    std::vector<EpitopeRecord> records;
    IngestReport report;
};

/// Expected header, in canonical order (any column order is accepted on
/// input; extra, missing or duplicate columns are schema errors).
extern const std::array<std::string, kFeatureCount + 6> kDatasetColumns;

/// Parses and validates the epitope CSV. Valid records come back in file
/// order; invalid rows are routed to the report with a reason.
/// Throws FileUnreadable, MissingColumn, UnexpectedColumn and, unless
/// downgraded via options, IllegalResidue.
LoadResult load_csv(const std::string& path, const LoadOptions& options = {});

/// True iff protein_seq[start..end] (1-based, inclusive) equals peptide_seq.
bool check_span(const EpitopeRecord& record);

struct SplitSpec {
    double train_fraction = 0.64;
    double val_fraction = 0.16;
    double test_fraction = 0.20;
    std::uint64_t seed = 0;

    /// Fractions must be > 0 and sum to 1 within 1e-12; throws InvalidArgument.
    void validate() const;
};

/// Whole-dataset split sizes by largest remainder; sums to n exactly.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec);

/// Deterministic stratified assignment. Each split's per-class count is
/// within 1 of exact proportionality; returned index lists are ascending.
/// Throws DegenerateSplit when a split of size >= 2 would receive zero
/// records of a class that exists globally (size-1 splits cannot hold both
/// classes and are exempt), or when the input lacks a class entirely.
std::array<std::vector<std::size_t>, 3> stratified_split_indices(
    const std::vector<int>& labels, const SplitSpec& spec);

struct DatasetSplits {
    std::vector<EpitopeRecord> train;
    std::vector<EpitopeRecord> val;
    std::vector<EpitopeRecord> test;
};

DatasetSplits stratified_split(const std::vector<EpitopeRecord>& records,
                               const SplitSpec& spec);

enum class FeaturizeMode {
    Passthrough, // copy the dataset's eight precomputed columns
    Recompute,   // recompute all eight descriptors from the sequences
};

FeatureVector featurize(const EpitopeRecord& record, FeaturizeMode mode,
                        const ScaleRepository& scales);

/// Batch featurize; in Recompute mode protein descriptors are computed
/// once per distinct protein sequence.
std::vector<FeatureVector> featurize_all(const std::vector<EpitopeRecord>& records,
                                         FeaturizeMode mode,
                                         const ScaleRepository& scales);

struct Standardizer {
    std::array<double, kFeatureCount> means{};
    std::array<double, kFeatureCount> stddevs{};
    std::array<bool, kFeatureCount> constant_feature{};

    std::array<double, kFeatureCount> apply(const std::array<double, kFeatureCount>& x) const;
    FeatureVector apply(const FeatureVector& v) const;
};

/// Per-feature mean and population standard deviation over the training
/// split only. A constant feature gets stddev 1 and a warning flag.
/// Throws InvalidArgument on an empty training set.
Standardizer fit_standardizer(const std::vector<FeatureVector>& train);

/// Side-by-side passthrough vs recomputed vectors for one record.
/// The two can legitimately differ; nothing is asserted here.
struct FeatureComparison {
    std::array<double, kFeatureCount> passthrough{};
    std::array<double, kFeatureCount> recomputed{};
    std::array<double, kFeatureCount> abs_diff{};
};

FeatureComparison compare_feature_modes(const EpitopeRecord& record,
                                        const ScaleRepository& scales);

// CSV exports (returned as text; callers decide where to write).
std::string export_features_csv(const std::vector<FeatureVector>& vectors);
std::string export_summary_csv(const std::vector<FeatureVector>& vectors);
std::string export_correlation_csv(const std::vector<FeatureVector>& vectors);
std::string export_comparison_csv(const std::vector<EpitopeRecord>& records,
                                  const ScaleRepository& scales);

} // namespace epinet
