#include "pnmf/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pnmf/error.hpp"

namespace pnmf::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, std::string_view detail) {
  throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + std::string(detail));
}

}  // namespace

LabeledMatrix parse_csv(std::string_view text, std::string_view source, bool nonnegative) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  LabeledMatrix out;
  std::vector<double> values;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;

    const auto fields = split_fields(line);
    if (!have_header) {
      if (fields.size() < 2) fail(source, line_no, "header needs an id column and at least one data column");
      out.id_header = std::string(fields[0]);
      for (std::size_t c = 1; c < fields.size(); ++c) out.column_names.emplace_back(fields[c]);
      have_header = true;
      continue;
    }
    if (fields.size() != out.column_names.size() + 1) {
      fail(source, line_no,
           "expected " + std::to_string(out.column_names.size() + 1) + " fields, found " +
               std::to_string(fields.size()));
    }
    out.row_ids.emplace_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string_view cell = fields[c];
      const std::string where = "column " + std::to_string(c + 1) + " (" +
                                out.column_names[c - 1] + ")";
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        fail(source, line_no, where + ": not a number: '" + std::string(cell) + "'");
      }
      if (!std::isfinite(v)) fail(source, line_no, where + ": non-finite value");
      if (nonnegative && v < 0.0) {
        fail(source, line_no, where + ": negative value " + std::string(cell));
      }
      values.push_back(v);
    }
  }
  if (!have_header) throw InputError(std::string(source) + ": empty file");
  if (out.row_ids.empty()) throw InputError(std::string(source) + ": no data rows");
  out.matrix = DenseMatrix(out.row_ids.size(), out.column_names.size(), std::move(values));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LabeledMatrix load_csv(const std::filesystem::path& path, bool nonnegative) {
  return parse_csv(read_file(path), path.string(), nonnegative);
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string format_csv(const LabeledMatrix& m) {
  std::string out = m.id_header;
  for (const auto& name : m.column_names) out += "," + name;
  out += '\n';
  for (std::size_t i = 0; i < m.matrix.rows(); ++i) {
    out += i < m.row_ids.size() ? m.row_ids[i] : std::to_string(i);
    for (std::size_t j = 0; j < m.matrix.cols(); ++j) {
      out += ',';
      out += format_double(m.matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

void save_csv(const std::filesystem::path& path, const LabeledMatrix& m) {
  write_file_atomic(path, format_csv(m));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(tmp.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError(tmp.string() + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError(path.string() + ": rename failed: " + ec.message());
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

}  // namespace pnmf::io

namespace pnmf::io {

namespace {
std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace

std::string scree_svg(std::span<const std::size_t> ranks, std::span<const double> volumes,
                      std::size_t suggested_rank) {
  constexpr double width = 480, height = 320, left = 60, right = 20, top = 30, bottom = 50;
  constexpr double floor_log = -16.0;

  std::vector<double> logs;
  double lo = 0.0;
  for (double v : volumes) {
    const double l = v > 0.0 ? std::max(std::log10(v), floor_log) : floor_log;
    logs.push_back(l);
    lo = std::min(lo, l);
  }
  lo = std::floor(lo) - (lo == std::floor(lo) ? 1.0 : 0.0);
  const double hi = std::max(0.5, *std::max_element(logs.begin(), logs.end()));
  const double r0 = ranks.empty() ? 0.0 : static_cast<double>(ranks.front());
  const double r1 = ranks.empty() ? 1.0 : static_cast<double>(ranks.back());
  const double span = r1 > r0 ? r1 - r0 : 1.0;

  auto px = [&](double r) { return left + (r - r0) / span * (width - left - right); };
  auto py = [&](double l) { return top + (hi - l) / (hi - lo) * (height - top - bottom); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\" "
         "viewBox=\"0 0 480 320\">\n";
  svg += "<rect width=\"480\" height=\"320\" fill=\"white\"/>\n";
  svg += "<text x=\"240\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">Volume scree</text>\n";
  // Axes.
  svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(height - bottom) + "\" x2=\"" +
         fixed(width - right) + "\" y2=\"" + fixed(height - bottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top) + "\" x2=\"" + fixed(left) +
         "\" y2=\"" + fixed(height - bottom) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"240\" y=\"" + fixed(height - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">rank</text>\n";
  svg += "<text x=\"15\" y=\"" + fixed((top + height - bottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 15 " + fixed((top + height - bottom) / 2) +
         ")\">log10 volume</text>\n";
  for (double t = std::ceil(lo); t <= hi; t += 1.0) {
    svg += "<text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(py(t) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
           std::to_string(static_cast<int>(t)) + "</text>\n";
  }

  std::string points;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const double x = px(static_cast<double>(ranks[i]));
    if (!points.empty()) points += ' ';
    points += fixed(x) + "," + fixed(py(logs[i]));
    svg += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(height - bottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
           std::to_string(ranks[i]) + "</text>\n";
  }
  svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"" + points +
         "\"/>\n";
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const bool chosen = ranks[i] == suggested_rank;
    svg += "<circle cx=\"" + fixed(px(static_cast<double>(ranks[i]))) + "\" cy=\"" +
           fixed(py(logs[i])) + "\" r=\"" + (chosen ? "6" : "3.5") + "\" fill=\"" +
           (chosen ? "crimson" : "steelblue") + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace pnmf::io
