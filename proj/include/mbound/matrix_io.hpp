#ifndef MBOUND_MATRIX_IO_HPP
#define MBOUND_MATRIX_IO_HPP

#include "mbound/matrix.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace mbound {

// text: one row per line, whitespace separated decimals; blank lines and
// lines starting with '#' are skipped.
// json: {"rows": [[...], ...]}.
enum class MatrixFormat { text, json };

std::optional<MatrixFormat> parse_matrix_format(std::string_view name) noexcept;

// json when the first non-blank character is '{'.
MatrixFormat detect_format(std::string_view content) noexcept;

// Throws ParseError (with line and column) for malformed content and for
// ragged or non-square input.
DenseMatrix parse_matrix(std::string_view content, std::optional<MatrixFormat> format = std::nullopt);
DenseMatrix read_matrix_file(const std::filesystem::path& path);

// 17 significant digits, so reading the output back is exact.
std::string format_matrix(const DenseMatrix& m, MatrixFormat format);
void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format);

} // namespace mbound

#endif
