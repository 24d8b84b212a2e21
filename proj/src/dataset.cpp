#include "epinet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "epinet/csv.hpp"
#include "epinet/errors.hpp"
#include "epinet/rng.hpp"
#include "epinet/sequence.hpp"
#include "epinet/text.hpp"

namespace epinet {

const std::array<std::string, kFeatureCount + 6> kDatasetColumns = {
    "parent_protein_id", "protein_seq", "start_position", "end_position",
    "peptide_seq",       "chou_fasman", "emini",          "kolaskar_tongaonkar",
    "parker",            "isoelectric_point", "aromaticity", "hydrophobicity",
    "stability",         "target",
};

std::string IngestReport::to_text() const {
    std::string out;
    out += "loaded: " + std::to_string(loaded) + "\n";
    out += "rejected: " + std::to_string(rejected()) + "\n";
    out += "span_mismatches: " + std::to_string(span_mismatches) + "\n";
    for (const auto& r : rejections) {
        out += "row " + std::to_string(r.row) + ": " + r.reason + "\n";
    }
    return out;
}

namespace {

struct ColumnMap {
    std::array<std::size_t, kFeatureCount + 6> index{};
};

ColumnMap map_columns(const csv::Row& header) {
    ColumnMap map;
    std::vector<bool> used(header.size(), false);
    for (std::size_t k = 0; k < kDatasetColumns.size(); ++k) {
        bool found = false;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == kDatasetColumns[k]) {
                if (found) {
                    throw Error(ErrorCode::UnexpectedColumn,
                                "duplicate column `" + kDatasetColumns[k] + "`");
                }
                map.index[k] = i;
                used[i] = true;
                found = true;
            }
        }
        if (!found) {
            throw Error(ErrorCode::MissingColumn,
                        "missing column `" + kDatasetColumns[k] + "`");
        }
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!used[i]) {
            throw Error(ErrorCode::UnexpectedColumn, "unexpected column `" + header[i] + "`");
        }
    }
    return map;
}

// Field offsets within kDatasetColumns.
enum : std::size_t {
    kColId = 0,
    kColProtein = 1,
    kColStart = 2,
    kColEnd = 3,
    kColPeptide = 4,
    kColFirstFeature = 5,
    kColTarget = 13,
};

} // namespace

LoadResult load_csv(const std::string& path, const LoadOptions& options) {
    std::string text = read_file(path);
    if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
    const csv::Table table = csv::parse(text);
    if (table.header.empty()) {
        throw Error(ErrorCode::MissingColumn, path + ": empty file, no header row");
    }
    const ColumnMap columns = map_columns(table.header);

    LoadResult result;
    result.records.reserve(table.rows.size());

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const csv::Row& row = table.rows[r];
        const std::size_t row_no = r + 1;
        auto reject = [&](std::string reason) {
            result.report.rejections.push_back({row_no, std::move(reason)});
        };

        if (row.size() != table.header.size()) {
            reject("wrong field count (got " + std::to_string(row.size()) + ", expected " +
                   std::to_string(table.header.size()) + ")");
            continue;
        }
        const auto field = [&](std::size_t k) -> const std::string& {
            return row[columns.index[k]];
        };

        EpitopeRecord rec;
        rec.parent_protein_id = field(kColId);

        bool bad = false;
        const auto take_sequence = [&](std::size_t k, const char* what) {
            try {
                return validate_sequence(field(k));
            } catch (const IllegalResidueError& e) {
                if (!options.skip_illegal_residues) {
                    throw Error(ErrorCode::IllegalResidue,
                                path + ", data row " + std::to_string(row_no) + ", " + what +
                                    ": " + e.what());
                }
                reject(std::string(e.what()) + " in " + what);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::EmptySequence) throw;
                reject(std::string("empty ") + what);
            }
            bad = true;
            return std::string();
        };

        rec.protein_seq = take_sequence(kColProtein, "protein_seq");
        if (bad) continue;
        rec.peptide_seq = take_sequence(kColPeptide, "peptide_seq");
        if (bad) continue;

        const auto start = try_parse_int(field(kColStart));
        if (!start) {
            reject("bad start_position");
            continue;
        }
        const auto end = try_parse_int(field(kColEnd));
        if (!end) {
            reject("bad end_position");
            continue;
        }
        rec.start_position = *start;
        rec.end_position = *end;

        bool feature_ok = true;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const auto value = try_parse_double(field(kColFirstFeature + f));
            if (!value || !std::isfinite(*value)) {
                reject("bad " + std::string(kFeatureNames[f]));
                feature_ok = false;
                break;
            }
            rec.features[f] = *value;
        }
        if (!feature_ok) continue;

        const auto target = try_parse_int(field(kColTarget));
        if (!target || (*target != 0 && *target != 1)) {
            reject("bad target");
            continue;
        }
        rec.target = static_cast<int>(*target);

        if (rec.end_position < rec.start_position) {
            reject("inverted span");
            continue;
        }
        if (rec.start_position < 1 ||
            rec.end_position > static_cast<long long>(rec.protein_seq.size())) {
            reject("span out of bounds");
            continue;
        }
        const long long span_len = rec.end_position - rec.start_position + 1;
        if (span_len != static_cast<long long>(rec.peptide_seq.size())) {
            reject("peptide length mismatch");
            continue;
        }

        if (!check_span(rec)) ++result.report.span_mismatches;
        result.records.push_back(std::move(rec));
    }
    result.report.loaded = result.records.size();
    return result;
}

bool check_span(const EpitopeRecord& record) {
    const auto offset = static_cast<std::size_t>(record.start_position - 1);
    const auto length = static_cast<std::size_t>(record.end_position - record.start_position + 1);
    return record.protein_seq.compare(offset, length, record.peptide_seq) == 0;
}

void SplitSpec::validate() const {
    const double sum = train_fraction + val_fraction + test_fraction;
    if (!(train_fraction > 0.0) || !(val_fraction > 0.0) || !(test_fraction > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "split fractions must all be positive");
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument,
                    "split fractions must sum to 1, got " + g17(sum));
    }
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec) {
    spec.validate();
    const std::array<double, 3> fractions = {spec.train_fraction, spec.val_fraction,
                                             spec.test_fraction};
    std::array<std::size_t, 3> sizes{};
    std::array<double, 3> remainder{};
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        const double quota = static_cast<double>(n) * fractions[s];
        sizes[s] = static_cast<std::size_t>(std::floor(quota));
        remainder[s] = quota - std::floor(quota);
        assigned += sizes[s];
    }
    for (std::size_t left = n - assigned; left > 0; --left) {
        std::size_t best = 0;
        for (std::size_t s = 1; s < 3; ++s) {
            if (remainder[s] > remainder[best]) best = s;
        }
        ++sizes[best];
        remainder[best] = -1.0;
    }
    return sizes;
}

std::array<std::vector<std::size_t>, 3> stratified_split_indices(
    const std::vector<int>& labels, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = labels.size();

    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw Error(ErrorCode::InvalidArgument,
                        "labels must be 0 or 1, got " + std::to_string(labels[i]));
        }
        by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    if (by_class[0].empty() || by_class[1].empty()) {
        throw Error(ErrorCode::DegenerateSplit, "need at least one record of each class");
    }

    const std::array<std::size_t, 3> sizes = split_sizes(n, spec);

    Rng rng(derive_seed(spec.seed, "split"));
    rng.shuffle(by_class[0]);
    rng.shuffle(by_class[1]);

    // Integer proportional quotas per (class, split); the exact remainders
    // n_c * size_s mod n decide who gets the leftover records, constrained
    // by each split's remaining capacity.
    std::array<std::array<std::size_t, 3>, 2> count{};
    std::array<std::size_t, 3> capacity = sizes;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t s = 0; s < 3; ++s) {
            count[c][s] = by_class[c].size() * sizes[s] / n;
            capacity[s] -= count[c][s];
        }
    }
    for (std::size_t c = 0; c < 2; ++c) {
        std::size_t leftover = by_class[c].size();
        for (std::size_t s = 0; s < 3; ++s) leftover -= count[c][s];

        std::array<std::size_t, 3> order = {0, 1, 2};
        std::array<std::size_t, 3> rem{};
        for (std::size_t s = 0; s < 3; ++s) rem[s] = by_class[c].size() * sizes[s] % n;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (rem[a] != rem[b]) return rem[a] > rem[b];
            return a < b;
        });
        for (const std::size_t s : order) {
            if (leftover == 0) break;
            if (capacity[s] > 0) {
                ++count[c][s];
                --capacity[s];
                --leftover;
            }
        }
    }

    for (std::size_t s = 0; s < 3; ++s) {
        if (sizes[s] < 2) continue;
        for (std::size_t c = 0; c < 2; ++c) {
            if (count[c][s] == 0) {
                static const char* kNames[3] = {"train", "val", "test"};
                throw Error(ErrorCode::DegenerateSplit,
                            std::string(kNames[s]) + " split would receive zero records of class " +
                                std::to_string(c));
            }
        }
    }

    std::array<std::vector<std::size_t>, 3> splits;
    for (std::size_t c = 0; c < 2; ++c) {
        std::size_t offset = 0;
        for (std::size_t s = 0; s < 3; ++s) {
            for (std::size_t k = 0; k < count[c][s]; ++k) {
                splits[s].push_back(by_class[c][offset + k]);
            }
            offset += count[c][s];
        }
    }
    for (auto& split : splits) std::sort(split.begin(), split.end());
    return splits;
}

DatasetSplits stratified_split(const std::vector<EpitopeRecord>& records,
                               const SplitSpec& spec) {
    std::vector<int> labels;
    labels.reserve(records.size());
    for (const auto& r : records) labels.push_back(r.target);
    const auto indices = stratified_split_indices(labels, spec);

    DatasetSplits out;
    std::vector<EpitopeRecord>* dests[3] = {&out.train, &out.val, &out.test};
    for (std::size_t s = 0; s < 3; ++s) {
        dests[s]->reserve(indices[s].size());
        for (const std::size_t i : indices[s]) dests[s]->push_back(records[i]);
    }
    return out;
}

FeatureVector featurize(const EpitopeRecord& record, FeaturizeMode mode,
                        const ScaleRepository& scales) {
    FeatureVector v;
    v.y = record.target;
    if (mode == FeaturizeMode::Passthrough) {
        v.x = record.features;
    } else {
        v.x = descriptor_vector(record.peptide_seq, record.protein_seq, scales);
    }
    return v;
}

std::vector<FeatureVector> featurize_all(const std::vector<EpitopeRecord>& records,
                                         FeaturizeMode mode,
                                         const ScaleRepository& scales) {
    std::vector<FeatureVector> out;
    out.reserve(records.size());
    if (mode == FeaturizeMode::Passthrough) {
        for (const auto& r : records) out.push_back(featurize(r, mode, scales));
        return out;
    }

    std::unordered_map<std::string, std::array<double, 4>> protein_cache;
    for (const auto& r : records) {
        FeatureVector v;
        v.y = r.target;
        v.x[0] = chou_fasman(r.peptide_seq, scales);
        v.x[1] = emini(r.peptide_seq, scales);
        v.x[2] = kolaskar_tongaonkar(r.peptide_seq, scales);
        v.x[3] = parker(r.peptide_seq, scales);
        auto it = protein_cache.find(r.protein_seq);
        if (it == protein_cache.end()) {
            const std::array<double, 4> prot = {
                isoelectric_point(r.protein_seq, scales.pka),
                aromaticity(r.protein_seq),
                gravy(r.protein_seq, scales),
                instability_index(r.protein_seq, scales.diwv),
            };
            it = protein_cache.emplace(r.protein_seq, prot).first;
        }
        for (std::size_t f = 0; f < 4; ++f) v.x[4 + f] = it->second[f];
        out.push_back(v);
    }
    return out;
}

std::array<double, kFeatureCount> Standardizer::apply(
    const std::array<double, kFeatureCount>& x) const {
    std::array<double, kFeatureCount> out;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        out[f] = (x[f] - means[f]) / stddevs[f];
    }
    return out;
}

FeatureVector Standardizer::apply(const FeatureVector& v) const {
    return {apply(v.x), v.y};
}

Standardizer fit_standardizer(const std::vector<FeatureVector>& train) {
    if (train.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cannot fit standardizer on empty training set");
    }
    Standardizer st;
    const auto n = static_cast<double>(train.size());
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        double sum = 0.0;
        for (const auto& v : train) sum += v.x[f];
        const double mean = sum / n;
        double sq = 0.0;
        for (const auto& v : train) {
            const double d = v.x[f] - mean;
            sq += d * d;
        }
        st.means[f] = mean;
        const double stddev = std::sqrt(sq / n);
        if (stddev == 0.0) {
            st.stddevs[f] = 1.0;
            st.constant_feature[f] = true;
        } else {
            st.stddevs[f] = stddev;
        }
    }
    return st;
}

FeatureComparison compare_feature_modes(const EpitopeRecord& record,
                                        const ScaleRepository& scales) {
    FeatureComparison cmp;
    cmp.passthrough = featurize(record, FeaturizeMode::Passthrough, scales).x;
    cmp.recomputed = featurize(record, FeaturizeMode::Recompute, scales).x;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        cmp.abs_diff[f] = std::abs(cmp.passthrough[f] - cmp.recomputed[f]);
    }
    return cmp;
}

std::string export_features_csv(const std::vector<FeatureVector>& vectors) {
    csv::Row header;
    for (const auto& name : kFeatureNames) header.emplace_back(name);
    header.emplace_back("target");
    std::string out = csv::format_row(header);
    for (const auto& v : vectors) {
        csv::Row row;
        for (const double x : v.x) row.push_back(g17(x));
        row.push_back(std::to_string(v.y));
        out += csv::format_row(row);
    }
    return out;
}

std::string export_summary_csv(const std::vector<FeatureVector>& vectors) {
    std::string out = "feature,class,count,min,max,mean,stddev\n";
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        for (int cls = 0; cls <= 1; ++cls) {
            double lo = 0.0, hi = 0.0, sum = 0.0;
            std::size_t count = 0;
            for (const auto& v : vectors) {
                if (v.y != cls) continue;
                const double x = v.x[f];
                if (count == 0) {
                    lo = hi = x;
                } else {
                    lo = std::min(lo, x);
                    hi = std::max(hi, x);
                }
                sum += x;
                ++count;
            }
            const double mean = count ? sum / static_cast<double>(count) : 0.0;
            double sq = 0.0;
            for (const auto& v : vectors) {
                if (v.y != cls) continue;
                const double d = v.x[f] - mean;
                sq += d * d;
            }
            const double stddev = count ? std::sqrt(sq / static_cast<double>(count)) : 0.0;
            out += csv::format_row({std::string(kFeatureNames[f]), std::to_string(cls),
                                    std::to_string(count), g17(lo), g17(hi), g17(mean),
                                    g17(stddev)});
        }
    }
    return out;
}

std::string export_correlation_csv(const std::vector<FeatureVector>& vectors) {
    std::array<double, kFeatureCount> mean{};
    const auto n = static_cast<double>(vectors.size());
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        double sum = 0.0;
        for (const auto& v : vectors) sum += v.x[f];
        mean[f] = vectors.empty() ? 0.0 : sum / n;
    }
    std::array<std::array<double, kFeatureCount>, kFeatureCount> cov{};
    for (const auto& v : vectors) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            for (std::size_t j = i; j < kFeatureCount; ++j) {
                cov[i][j] += (v.x[i] - mean[i]) * (v.x[j] - mean[j]);
            }
        }
    }
    csv::Row header{"feature"};
    for (const auto& name : kFeatureNames) header.emplace_back(name);
    std::string out = csv::format_row(header);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        csv::Row row{std::string(kFeatureNames[i])};
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            const double cij = i <= j ? cov[i][j] : cov[j][i];
            const double denom = std::sqrt(cov[i][i] * cov[j][j]);
            double corr;
            if (i == j) {
                corr = 1.0;
            } else if (denom == 0.0) {
                corr = 0.0;
            } else {
                corr = cij / denom;
            }
            row.push_back(g17(corr));
        }
        out += csv::format_row(row);
    }
    return out;
}

std::string export_comparison_csv(const std::vector<EpitopeRecord>& records,
                                  const ScaleRepository& scales) {
    std::string out = "row,feature,passthrough,recomputed,abs_diff\n";
    for (std::size_t r = 0; r < records.size(); ++r) {
        const FeatureComparison cmp = compare_feature_modes(records[r], scales);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            out += csv::format_row({std::to_string(r + 1), std::string(kFeatureNames[f]),
                                    g17(cmp.passthrough[f]), g17(cmp.recomputed[f]),
                                    g17(cmp.abs_diff[f])});
        }
    }
    return out;
}

} // namespace epinet
