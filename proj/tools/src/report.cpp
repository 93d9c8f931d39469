#include "mlap/cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "mlap/cli/config.hpp"

namespace mlap::cli {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

double parse_real(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidConfig("cannot read " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

std::string StructuredReport::serialize() const {
    std::string out;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (b > 0) out += '\n';
        for (const Entry& e : blocks[b]) out += e.key + " = " + e.value + '\n';
    }
    return out;
}

StructuredReport StructuredReport::parse(std::string_view text) {
    StructuredReport report;
    Block current;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t end = text.find('\n');
        const std::string_view line = trim(text.substr(0, end));
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        ++line_no;
        if (line.empty()) {
            if (!current.empty()) report.blocks.push_back(std::move(current));
            current.clear();
            continue;
        }
        const std::size_t eq = line.find(" = ");
        if (eq == std::string_view::npos) {
            throw InvalidConfig("report line " + std::to_string(line_no) + " has no ' = '");
        }
        current.push_back({std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 3)))});
    }
    if (!current.empty()) report.blocks.push_back(std::move(current));
    return report;
}

const std::string* find(const Block& block, std::string_view key) {
    for (const Entry& e : block) {
        if (e.key == key) return &e.value;
    }
    return nullptr;
}

std::string format_real(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string format_bool(bool value) { return value ? "true" : "false"; }

std::string field_csv(const GridFunction& u) {
    const Grid1D& g = *u.grid;
    const std::size_t n = g.size();
    std::string out = "x,delta,u,du\n";
    out.reserve(out.size() + n * 96);
    char buffer[128];
    for (std::size_t i = 0; i < n; ++i) {
        double du = 0.0;
        if (i == 0) {
            du = (u[1] - u[0]) / g.width(0);
        } else if (i + 1 == n) {
            du = (u[i] - u[i - 1]) / g.width(i - 1);
        } else {
            const double hl = g.width(i - 1);
            const double hr = g.width(i);
            const double sl = (u[i] - u[i - 1]) / hl;
            const double sr = (u[i + 1] - u[i]) / hr;
            du = (hr * sl + hl * sr) / (hl + hr);
        }
        std::snprintf(buffer, sizeof buffer, "%.17g,%.17g,%.17g,%.17g\n", g.node(i), g.delta(i), u[i], du);
        out += buffer;
    }
    return out;
}

std::vector<FieldRow> parse_field_csv(std::string_view text) {
    std::vector<FieldRow> rows;
    bool header = true;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t end = text.find('\n');
        const std::string_view line = trim(text.substr(0, end));
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        ++line_no;
        if (line.empty()) continue;
        if (header) {
            if (line != "x,delta,u,du") throw InvalidConfig("field CSV header must be x,delta,u,du");
            header = false;
            continue;
        }
        double cells[4];
        std::string_view rest = line;
        for (int c = 0; c < 4; ++c) {
            const std::size_t comma = rest.find(',');
            if ((c < 3) == (comma == std::string_view::npos)) {
                throw InvalidConfig("field CSV line " + std::to_string(line_no) + " needs 4 columns");
            }
            cells[c] = parse_real(rest.substr(0, comma), "a CSV cell");
            if (c < 3) rest = rest.substr(comma + 1);
        }
        rows.push_back({cells[0], cells[1], cells[2], cells[3]});
    }
    if (header) throw InvalidConfig("field CSV is empty");
    return rows;
}

void ReproReport::add(ClaimRecord claim) {
    const auto at = std::upper_bound(claims.begin(), claims.end(), claim.id,
                                     [](const std::string& id, const ClaimRecord& c) { return id < c.id; });
    claims.insert(at, std::move(claim));
}

bool ReproReport::overall() const {
    return !claims.empty() &&
           std::all_of(claims.begin(), claims.end(), [](const ClaimRecord& c) { return c.pass; });
}

StructuredReport ReproReport::to_structured() const {
    StructuredReport report;
    report.blocks.push_back({{"command", "reproduce-theorem1"},
                             {"claims", std::to_string(claims.size())},
                             {"overall", overall() ? "pass" : "fail"}});
    for (const ClaimRecord& c : claims) {
        report.blocks.push_back({{"claim", c.id},
                                 {"predicted", c.predicted},
                                 {"measured", c.measured},
                                 {"tolerance", format_real(c.tolerance)},
                                 {"pass", format_bool(c.pass)}});
    }
    return report;
}

ReproReport ReproReport::from_structured(const StructuredReport& report) {
    ReproReport out;
    for (const Block& block : report.blocks) {
        const std::string* id = find(block, "claim");
        if (!id) continue;
        auto field = [&](std::string_view key) -> const std::string& {
            const std::string* v = find(block, key);
            if (!v) throw InvalidConfig("claim " + *id + " lacks '" + std::string(key) + "'");
            return *v;
        };
        ClaimRecord c;
        c.id = *id;
        c.predicted = field("predicted");
        c.measured = field("measured");
        c.tolerance = parse_real(field("tolerance"), "a tolerance");
        const std::string& pass = field("pass");
        if (pass != "true" && pass != "false") throw InvalidConfig("pass must be true or false");
        c.pass = pass == "true";
        out.add(std::move(c));
    }
    return out;
}

}  // namespace mlap::cli
