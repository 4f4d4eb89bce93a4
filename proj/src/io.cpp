#include "maxcorr/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "maxcorr/errors.hpp"

namespace maxcorr {

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line,
                             const std::string& what) {
    std::ostringstream msg;
    msg << source << ":" << line << ": " << what;
    throw ValidationError(msg.str());
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

double parse_double(const std::string& source, std::size_t line, const std::string& field,
                    const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        parse_fail(source, line, "cannot parse " + field + " from '" + text + "'");
    }
    return value;
}

bool skippable(const std::string& line) {
    const std::string t = trim(line);
    return t.empty() || t[0] == '#';
}

} // namespace

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

Portfolio read_portfolio_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<Obligor> names;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        const auto fields = split_csv(line);
        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "label" || fields[1] != "default_prob" ||
                fields[2] != "recovery" || fields[3] != "notional") {
                parse_fail(source_name, lineno,
                           "expected header 'label,default_prob,recovery,notional'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) {
            parse_fail(source_name, lineno, "expected 4 fields, got " +
                                                std::to_string(fields.size()));
        }
        if (fields[0].empty()) parse_fail(source_name, lineno, "empty label");
        try {
            names.emplace_back(fields[0],
                               parse_double(source_name, lineno, "default_prob", fields[1]),
                               parse_double(source_name, lineno, "recovery", fields[2]),
                               parse_double(source_name, lineno, "notional", fields[3]));
        } catch (const ValidationError& e) {
            parse_fail(source_name, lineno, e.what());
        }
    }
    if (!header_seen) parse_fail(source_name, lineno, "missing header row");
    if (names.empty()) parse_fail(source_name, lineno, "no obligor rows");
    return Portfolio(std::move(names));
}

Portfolio read_portfolio_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open portfolio file '" + path + "'");
    return read_portfolio_csv(in, path);
}

void write_portfolio_csv(std::ostream& out, const Portfolio& portfolio) {
    out << "label,default_prob,recovery,notional\n";
    for (const auto& o : portfolio.names()) {
        out << o.label << ',' << format_double(o.default_prob) << ','
            << format_double(o.recovery) << ',' << format_double(o.notional) << '\n';
    }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        const auto fields = split_csv(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            row.push_back(parse_double(source_name, lineno,
                                       "entry " + std::to_string(i + 1), fields[i]));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            parse_fail(source_name, lineno, "ragged row: expected " +
                                                std::to_string(rows.front().size()) +
                                                " entries, got " +
                                                std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) parse_fail(source_name, lineno, "empty matrix");
    if (rows.size() != rows.front().size()) {
        parse_fail(source_name, lineno,
                   "matrix must be square: " + std::to_string(rows.size()) + " rows, " +
                       std::to_string(rows.front().size()) + " columns");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
    return read_matrix_csv(in, path);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j) out << ',';
            out << format_double(matrix(i, j));
        }
        out << '\n';
    }
}

} // namespace maxcorr
