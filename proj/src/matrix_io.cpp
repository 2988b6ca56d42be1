#include "mbound/matrix_io.hpp"

#include "mbound/error.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mbound {

namespace {

using Rows = std::vector<std::vector<double>>;

bool is_blank(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\r';
}

DenseMatrix square_from_rows(const Rows& rows, std::size_t last_line)
{
    if (rows.empty()) throw ParseError("no matrix rows found", 0, 0);
    const std::size_t cols = rows.front().size();
    if (rows.size() != cols)
        throw ParseError("matrix is not square: " + std::to_string(rows.size()) + " rows, "
                             + std::to_string(cols) + " columns",
                         last_line, 1);
    try {
        return DenseMatrix::from_rows(rows);
    } catch (const Error& e) {
        throw ParseError(e.what(), 0, 0);
    }
}

DenseMatrix parse_text(std::string_view content)
{
    Rows rows;
    std::vector<std::size_t> row_lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t eol = std::min(content.find('\n', pos), content.size());
        const std::string_view line = content.substr(pos, eol - pos);
        ++line_no;
        pos = eol + 1;

        std::size_t i = 0;
        while (i < line.size() && is_blank(line[i])) ++i;
        if (i == line.size() || line[i] == '#') continue;

        std::vector<double> row;
        while (i < line.size()) {
            while (i < line.size() && is_blank(line[i])) ++i;
            if (i == line.size()) break;
            std::size_t j = i;
            while (j < line.size() && !is_blank(line[j])) ++j;
            const std::string_view token = line.substr(i, j - i);
            double value = 0.0;
            const char* first = token.data();
            if (!token.empty() && token.front() == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
            if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
                throw ParseError("invalid number '" + std::string(token) + "'", line_no, i + 1);
            row.push_back(value);
            i = j;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("row has " + std::to_string(row.size()) + " entries, expected "
                                 + std::to_string(rows.front().size()),
                             line_no, 1);
        rows.push_back(std::move(row));
        row_lines.push_back(line_no);
    }
    return square_from_rows(rows, row_lines.empty() ? 0 : row_lines.back());
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view content, std::size_t offset)
{
    offset = std::min(offset, content.size());
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k < offset; ++k) {
        if (content[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

DenseMatrix parse_json(std::string_view content)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        // byte is the 1-based position of the offending character
        const auto [line, column] = locate(content, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        if (const auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
        throw ParseError(msg, line, column);
    }
    if (!doc.is_object() || !doc.contains("rows")) throw ParseError("expected an object with key \"rows\"", 1, 1);
    const auto& jrows = doc["rows"];
    if (!jrows.is_array()) throw ParseError("\"rows\" must be an array", 1, 1);

    Rows rows;
    for (std::size_t r = 0; r < jrows.size(); ++r) {
        const auto& jrow = jrows[r];
        if (!jrow.is_array()) throw ParseError("row " + std::to_string(r + 1) + " is not an array", 0, 0);
        std::vector<double> row;
        for (std::size_t c = 0; c < jrow.size(); ++c) {
            if (!jrow[c].is_number())
                throw ParseError("row " + std::to_string(r + 1) + ", entry " + std::to_string(c + 1)
                                     + " is not a number",
                                 0, 0);
            row.push_back(jrow[c].get<double>());
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(row.size())
                                 + " entries, expected " + std::to_string(rows.front().size()),
                             0, 0);
        rows.push_back(std::move(row));
    }
    return square_from_rows(rows, 0);
}

std::string number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::optional<MatrixFormat> parse_matrix_format(std::string_view name) noexcept
{
    if (name == "text") return MatrixFormat::text;
    if (name == "json") return MatrixFormat::json;
    return std::nullopt;
}

MatrixFormat detect_format(std::string_view content) noexcept
{
    for (char c : content) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? MatrixFormat::json : MatrixFormat::text;
    }
    return MatrixFormat::text;
}

DenseMatrix parse_matrix(std::string_view content, std::optional<MatrixFormat> format)
{
    const MatrixFormat f = format.value_or(detect_format(content));
    return f == MatrixFormat::json ? parse_json(content) : parse_text(content);
}

DenseMatrix read_matrix_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix(buf.str());
}

std::string format_matrix(const DenseMatrix& m, MatrixFormat format)
{
    const std::size_t n = m.order();
    std::string out;
    if (format == MatrixFormat::text) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j) out += ' ';
                out += number(m(i, j));
            }
            out += '\n';
        }
        return out;
    }
    out = "{\"rows\": [";
    for (std::size_t i = 0; i < n; ++i) {
        out += i ? ",\n  [" : "\n  [";
        for (std::size_t j = 0; j < n; ++j) {
            if (j) out += ", ";
            out += number(m(i, j));
        }
        out += ']';
    }
    out += "\n]}\n";
    return out;
}

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << format_matrix(m, format);
}

} // namespace mbound
