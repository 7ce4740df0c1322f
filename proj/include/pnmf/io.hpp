#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pnmf/matrix.hpp"

namespace pnmf::io {

/// A matrix with its CSV labels: the header row names the columns and the
/// first column carries sample ids.
struct LabeledMatrix {
  DenseMatrix matrix;
  std::vector<std::string> row_ids;
  std::vector<std::string> column_names;
  std::string id_header = "id";
};

/// Parses CSV text. Rejects ragged rows, non-numeric cells, non-finite and
/// (when `nonnegative`) negative values; messages name line and column.
/// `source` prefixes error messages.
LabeledMatrix parse_csv(std::string_view text, std::string_view source, bool nonnegative = true);
LabeledMatrix load_csv(const std::filesystem::path& path, bool nonnegative = true);

std::string format_csv(const LabeledMatrix& m);
void save_csv(const std::filesystem::path& path, const LabeledMatrix& m);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view bytes);

/// Static SVG line chart of log10(volume) against rank, with the suggested
/// rank highlighted. Zero volumes are drawn at the 1e-16 floor.
std::string scree_svg(std::span<const std::size_t> ranks, std::span<const double> volumes,
                      std::size_t suggested_rank);

}  // namespace pnmf::io
