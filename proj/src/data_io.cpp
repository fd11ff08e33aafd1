#include "tapc/data_io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "tapc/error.hpp"

namespace tapc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace

DataMatrix parse_csv(std::string_view text, std::string_view source) {
  const std::string where(source);
  std::vector<std::string> names;
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t rows = 0;
  bool first = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto cells = split(line);
    if (first) {
      width = cells.size();
      first = false;
      double probe = 0.0;
      bool header = false;
      for (const auto cell : cells) header = header || !parse_number(cell, probe);
      if (header) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c].empty()) {
            throw ConfigError(where + ":" + std::to_string(line_no) + ": empty header cell in column " +
                              std::to_string(c + 1));
          }
          names.emplace_back(cells[c]);
        }
        continue;
      }
    }
    if (cells.size() != width) {
      throw ConfigError(where + ":" + std::to_string(line_no) + ": ragged row with " +
                        std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_number(cells[c], v)) {
        throw ConfigError(where + ":" + std::to_string(line_no) + ":" + std::to_string(c + 1) +
                          ": non-numeric cell '" + std::string(cells[c]) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (first) throw ConfigError(where + ": empty file");
  if (rows == 0) throw ConfigError(where + ": no data rows");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * width + c];
  return make_data(std::move(m), std::move(names));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

DataMatrix ingest_csv(const std::filesystem::path& path) { return parse_csv(read_text(path), path.string()); }

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tapc
