#include "epinet/scales.hpp"

#include <cmath>
#include <cstdio>

#include "epinet/errors.hpp"
#include "epinet/rng.hpp"
#include "epinet/text.hpp"

namespace epinet {
namespace {

[[noreturn]] void fail(const std::string& message) {
    throw Error(ErrorCode::ScaleTableError, message);
}

struct ParsedFile {
    std::string provenance;
    std::vector<std::pair<std::string, double>> entries;
};

ParsedFile parse_scale_file(const std::string& path, std::uint64_t expected_checksum) {
    const std::string bytes = read_file(path);
    const std::uint64_t actual = fnv1a64(bytes.data(), bytes.size());
    if (actual != expected_checksum) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "checksum mismatch for %s: expected 0x%016llx, got 0x%016llx "
                      "(file modified or corrupted)",
                      path.c_str(), static_cast<unsigned long long>(expected_checksum),
                      static_cast<unsigned long long>(actual));
        fail(buf);
    }

    ParsedFile out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool in_header = true;
    while (pos <= bytes.size()) {
        const std::size_t nl = bytes.find('\n', pos);
        std::string_view line(bytes.data() + pos,
                              (nl == std::string::npos ? bytes.size() : nl) - pos);
        pos = (nl == std::string::npos) ? bytes.size() + 1 : nl + 1;
        ++line_no;

        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (in_header) {
                std::string_view text = trim(line.substr(1));
                if (!out.provenance.empty()) out.provenance.push_back('\n');
                out.provenance.append(text);
            }
            continue;
        }
        in_header = false;

        const std::size_t sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos) {
            fail(path + ":" + std::to_string(line_no) + ": expected `key value`");
        }
        const std::string key(trim(line.substr(0, sp)));
        const std::string_view value_text = trim(line.substr(sp + 1));
        const auto value = try_parse_double(value_text);
        if (!value || !std::isfinite(*value)) {
            fail(path + ":" + std::to_string(line_no) + ": bad numeric value `" +
                 std::string(value_text) + "`");
        }
        out.entries.emplace_back(key, *value);
    }
    return out;
}

} // namespace

AminoAcidScale::AminoAcidScale(std::string name, std::string provenance,
                               const std::vector<std::pair<char, double>>& entries)
    : name_(std::move(name)), provenance_(std::move(provenance)) {
    std::array<bool, kResidueCount> seen{};
    for (const auto& [residue, value] : entries) {
        const std::size_t idx = residue_index(residue);
        if (idx == kNoResidue) {
            fail(name_ + ": non-standard residue '" + std::string(1, residue) + "'");
        }
        if (seen[idx]) {
            fail(name_ + ": duplicate entry for residue '" + std::string(1, residue) + "'");
        }
        if (!std::isfinite(value)) {
            fail(name_ + ": non-finite value for residue '" + std::string(1, residue) + "'");
        }
        seen[idx] = true;
        values_[idx] = value;
    }
    for (std::size_t i = 0; i < kResidueCount; ++i) {
        if (!seen[i]) {
            fail(name_ + ": missing residue '" + std::string(1, kResidues[i]) + "'");
        }
    }
}

double AminoAcidScale::at(char residue) const {
    const std::size_t idx = residue_index(residue);
    if (idx == kNoResidue) {
        throw Error(ErrorCode::IllegalResidue,
                    name_ + ": lookup of non-standard residue '" + std::string(1, residue) + "'");
    }
    return values_[idx];
}

PairScale::PairScale(std::string name, std::string provenance,
                     const std::vector<std::pair<std::string, double>>& entries)
    : name_(std::move(name)), provenance_(std::move(provenance)) {
    std::array<bool, kResidueCount * kResidueCount> seen{};
    for (const auto& [pair, value] : entries) {
        if (pair.size() != 2 || !is_residue(pair[0]) || !is_residue(pair[1])) {
            fail(name_ + ": bad residue pair `" + pair + "`");
        }
        const std::size_t idx = residue_index(pair[0]) * kResidueCount + residue_index(pair[1]);
        if (seen[idx]) {
            fail(name_ + ": duplicate entry for pair `" + pair + "`");
        }
        if (!std::isfinite(value)) {
            fail(name_ + ": non-finite value for pair `" + pair + "`");
        }
        seen[idx] = true;
        values_[idx] = value;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            const char x = kResidues[i / kResidueCount];
            const char y = kResidues[i % kResidueCount];
            fail(name_ + ": missing pair `" + std::string{x, y} + "`");
        }
    }
}

double PairScale::at(char x, char y) const {
    const std::size_t ix = residue_index(x);
    const std::size_t iy = residue_index(y);
    if (ix == kNoResidue || iy == kNoResidue) {
        throw Error(ErrorCode::IllegalResidue,
                    name_ + ": lookup of non-standard pair `" + std::string{x, y} + "`");
    }
    return values_[ix * kResidueCount + iy];
}

PkaSet::PkaSet(std::string provenance,
               const std::vector<std::pair<std::string, double>>& entries)
    : provenance_(std::move(provenance)) {
    bool have_n = false, have_c = false;
    std::array<bool, kResidueCount> have_side{};
    for (const auto& [key, value] : entries) {
        if (value <= 0.0 || value >= 14.0 || !std::isfinite(value)) {
            fail("pka: value for `" + key + "` outside (0, 14)");
        }
        if (key == "n_terminus") {
            if (have_n) fail("pka: duplicate n_terminus");
            n_terminus_ = value;
            have_n = true;
        } else if (key == "c_terminus") {
            if (have_c) fail("pka: duplicate c_terminus");
            c_terminus_ = value;
            have_c = true;
        } else if (key.size() == 1 && has_side_chain(key[0])) {
            const std::size_t idx = residue_index(key[0]);
            if (have_side[idx]) fail("pka: duplicate entry for `" + key + "`");
            side_[idx] = value;
            have_side[idx] = true;
        } else {
            fail("pka: unexpected key `" + key + "`");
        }
    }
    if (!have_n) fail("pka: missing n_terminus");
    if (!have_c) fail("pka: missing c_terminus");
    for (const char r : kSideChains) {
        if (!have_side[residue_index(r)]) {
            fail("pka: missing side chain `" + std::string(1, r) + "`");
        }
    }
}

double PkaSet::side_chain(char residue) const {
    if (!has_side_chain(residue)) {
        throw Error(ErrorCode::InvalidArgument,
                    "pka: residue '" + std::string(1, residue) + "' has no side-chain pKa");
    }
    return side_[residue_index(residue)];
}

namespace {

struct ScaleFileSpec {
    const char* filename;
    std::uint64_t fnv1a;
};

// Raw-byte checksums of the shipped tables; regenerate with any FNV-1a64
// tool if a table is deliberately revised.
constexpr ScaleFileSpec kChouFasman = {"chou_fasman.txt", 0x2c73aee12c6ca763ull};
constexpr ScaleFileSpec kEmini = {"emini.txt", 0x4a31d9988d71fa8full};
constexpr ScaleFileSpec kKolaskar = {"kolaskar_tongaonkar.txt", 0x4cbc02e4ad7d77e4ull};
constexpr ScaleFileSpec kParker = {"parker.txt", 0xd8fbbe316039aa2bull};
constexpr ScaleFileSpec kKyteDoolittle = {"kyte_doolittle.txt", 0xd6bb014ce6386ba0ull};
constexpr ScaleFileSpec kDiwv = {"diwv.txt", 0x346d36ddfb28bdb8ull};
constexpr ScaleFileSpec kPka = {"pka.txt", 0x8db1e18608dc5b31ull};

AminoAcidScale load_residue_scale(const std::string& dir, const ScaleFileSpec& spec,
                                  const char* name) {
    const ParsedFile parsed = parse_scale_file(dir + "/" + spec.filename, spec.fnv1a);
    std::vector<std::pair<char, double>> entries;
    entries.reserve(parsed.entries.size());
    for (const auto& [key, value] : parsed.entries) {
        if (key.size() != 1) {
            fail(std::string(name) + ": expected single-letter key, got `" + key + "`");
        }
        entries.emplace_back(key[0], value);
    }
    return AminoAcidScale(name, parsed.provenance, entries);
}

} // namespace

ScaleRepository ScaleRepository::load(const std::string& dir) {
    ScaleRepository repo;
    repo.chou_fasman = load_residue_scale(dir, kChouFasman, "chou_fasman");
    repo.emini = load_residue_scale(dir, kEmini, "emini");
    repo.kolaskar_tongaonkar = load_residue_scale(dir, kKolaskar, "kolaskar_tongaonkar");
    repo.parker = load_residue_scale(dir, kParker, "parker");
    repo.kyte_doolittle = load_residue_scale(dir, kKyteDoolittle, "kyte_doolittle");
    {
        const ParsedFile parsed = parse_scale_file(dir + "/" + kDiwv.filename, kDiwv.fnv1a);
        repo.diwv = PairScale("diwv", parsed.provenance, parsed.entries);
    }
    {
        const ParsedFile parsed = parse_scale_file(dir + "/" + kPka.filename, kPka.fnv1a);
        repo.pka = PkaSet(parsed.provenance, parsed.entries);
    }
    return repo;
}

} // namespace epinet
