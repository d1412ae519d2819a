#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "tsallis/errors.hpp"
#include "tsallis/simlab.hpp"

namespace tsallis::simlab {

namespace {

constexpr std::string_view kCsvHeader = "u,q,n,pri_stein,pri_bz,baseline_risk";
constexpr std::string_view kSchema = "tsallis-pri-table/1";
const std::vector<std::string> kColumns = {"u", "q", "n", "pri_stein", "pri_bz", "baseline_risk"};

using json = nlohmann::ordered_json;

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view cell, std::size_t line) {
    T v{};
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc() || ptr != end) {
        throw ParseError(fmt::format("line {}: '{}' is not a valid number", line, cell));
    }
    return v;
}

std::string join_u(const std::vector<double>& u) {
    std::string s;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) s += ';';
        s += fmt::format("{:.6f}", u[i]);
    }
    return s;
}

}  // namespace

TableFormat parse_format(std::string_view name) {
    if (name == "csv") return TableFormat::Csv;
    if (name == "json") return TableFormat::Json;
    throw ParseError(fmt::format("unknown format '{}' (expected csv or json)", name));
}

void write_table_csv(std::ostream& out, const std::vector<PriCell>& cells) {
    out << kCsvHeader << '\n';
    for (const auto& c : cells) {
        out << fmt::format("{},{:.6f},{},{:.6f},{:.6f},{:.6f}\n", join_u(c.u), c.q, c.n, c.pri_stein, c.pri_bz,
                           c.baseline_risk);
    }
}

std::vector<PriCell> read_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ParseError(fmt::format("table CSV must start with the header '{}'", kCsvHeader));
    }
    std::vector<PriCell> cells;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != kColumns.size()) {
            throw ParseError(fmt::format("line {}: expected {} fields, got {}", lineno, kColumns.size(), f.size()));
        }
        PriCell c;
        for (auto part : split(f[0], ';')) c.u.push_back(parse_number<double>(part, lineno));
        c.q = parse_number<double>(f[1], lineno);
        c.n = parse_number<int>(f[2], lineno);
        c.pri_stein = parse_number<double>(f[3], lineno);
        c.pri_bz = parse_number<double>(f[4], lineno);
        c.baseline_risk = parse_number<double>(f[5], lineno);
        cells.push_back(std::move(c));
    }
    return cells;
}

void write_table_json(std::ostream& out, const std::vector<PriCell>& cells) {
    json doc;
    doc["schema"] = kSchema;
    doc["columns"] = kColumns;
    json rows = json::array();
    for (const auto& c : cells) {
        json row;
        row["u"] = c.u;
        row["q"] = c.q;
        row["n"] = c.n;
        row["pri_stein"] = c.pri_stein;
        row["pri_bz"] = c.pri_bz;
        row["baseline_risk"] = c.baseline_risk;
        rows.push_back(std::move(row));
    }
    doc["cells"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void validate_table_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("invalid JSON: {}", e.what()));
    }
    if (!doc.is_object()) throw ParseError("table JSON must be an object");
    if (!doc.contains("schema") || doc["schema"] != kSchema) {
        throw ParseError(fmt::format("table JSON needs \"schema\": \"{}\"", kSchema));
    }
    if (!doc.contains("columns") || doc["columns"] != json(kColumns)) {
        throw ParseError("table JSON \"columns\" must list u,q,n,pri_stein,pri_bz,baseline_risk");
    }
    if (!doc.contains("cells") || !doc["cells"].is_array()) throw ParseError("table JSON needs a \"cells\" array");
    std::size_t i = 0;
    for (const auto& c : doc["cells"]) {
        auto fail = [i](std::string_view what) { throw ParseError(fmt::format("cell {}: {}", i, what)); };
        if (!c.is_object() || c.size() != kColumns.size()) fail("must be an object with exactly the six columns");
        if (!c.contains("u") || !c["u"].is_array() || c["u"].empty()) fail("\"u\" must be a non-empty array");
        for (const auto& v : c["u"]) {
            if (!v.is_number()) fail("\"u\" entries must be numbers");
        }
        for (const char* key : {"q", "pri_stein", "pri_bz", "baseline_risk"}) {
            if (!c.contains(key) || !c[key].is_number()) fail(fmt::format("\"{}\" must be a number", key));
        }
        if (!c.contains("n") || !c["n"].is_number_integer()) fail("\"n\" must be an integer");
        if (!(c["baseline_risk"].get<double>() > 0.0)) fail("\"baseline_risk\" must be > 0");
        ++i;
    }
}

std::vector<PriCell> read_table_json(std::istream& in) {
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    validate_table_json(text);
    const auto doc = json::parse(text);
    std::vector<PriCell> cells;
    for (const auto& c : doc["cells"]) {
        PriCell cell;
        cell.u = c["u"].get<std::vector<double>>();
        cell.q = c["q"].get<double>();
        cell.n = c["n"].get<int>();
        cell.pri_stein = c["pri_stein"].get<double>();
        cell.pri_bz = c["pri_bz"].get<double>();
        cell.baseline_risk = c["baseline_risk"].get<double>();
        cells.push_back(std::move(cell));
    }
    return cells;
}

void write_table(std::ostream& out, const std::vector<PriCell>& cells, TableFormat format) {
    if (format == TableFormat::Csv) {
        write_table_csv(out, cells);
    } else {
        write_table_json(out, cells);
    }
}

void export_table(const std::vector<PriCell>& cells, TableFormat format, const std::string& path) {
    if (cells.empty()) throw DomainError("refusing to export an empty table");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
    write_table(out, cells, format);
    out.flush();
    if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

void write_figure_csv(std::ostream& out, const FigureData& fig) {
    for (std::size_t i = 0; i < fig.columns.size(); ++i) out << (i ? "," : "") << fig.columns[i];
    out << '\n';
    for (const auto& row : fig.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            const bool integral = fig.columns[i] == "n" || fig.columns[i] == "sample";
            out << (i ? "," : "") << (integral ? fmt::format("{:.0f}", row[i]) : fmt::format("{:.6f}", row[i]));
        }
        out << '\n';
    }
}

}  // namespace tsallis::simlab
