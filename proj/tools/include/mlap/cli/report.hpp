#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mlap/grid.hpp"

namespace mlap::cli {

struct Entry {
    std::string key;
    std::string value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

using Block = std::vector<Entry>;

/// UTF-8 text with one `key = value` per line; blocks are separated by a blank line.
struct StructuredReport {
    std::vector<Block> blocks;

    std::string serialize() const;
    /// Throws InvalidConfig on a line without " = ".
    static StructuredReport parse(std::string_view text);

    friend bool operator==(const StructuredReport&, const StructuredReport&) = default;
};

/// Value of `key` in `block`, or nullptr.
const std::string* find(const Block& block, std::string_view key);

/// 17 significant digits, which read back to the same double.
std::string format_real(double value);
std::string format_bool(bool value);

/// Columns x,delta,u,du. du is the three-point derivative on the nonuniform
/// grid (one-sided at the two ends).
std::string field_csv(const GridFunction& u);

struct FieldRow {
    double x = 0.0;
    double delta = 0.0;
    double u = 0.0;
    double du = 0.0;
};

/// Reads a field CSV written by field_csv. Throws InvalidConfig.
std::vector<FieldRow> parse_field_csv(std::string_view text);

struct ClaimRecord {
    std::string id;
    std::string predicted;
    std::string measured;
    double tolerance = 0.0;
    bool pass = false;

    friend bool operator==(const ClaimRecord&, const ClaimRecord&) = default;
};

/// Claims of a reproduction run, kept sorted by id.
struct ReproReport {
    std::vector<ClaimRecord> claims;

    void add(ClaimRecord claim);
    bool overall() const;

    StructuredReport to_structured() const;
    /// Throws InvalidConfig on malformed claim blocks.
    static ReproReport from_structured(const StructuredReport& report);

    friend bool operator==(const ReproReport&, const ReproReport&) = default;
};

}  // namespace mlap::cli
