#include "gridot/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gridot/errors.hpp"

namespace gridot {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::int64_t parse_int(std::string_view field, std::int64_t line, std::int64_t column) {
  field = trim(field);
  if (field.empty()) throw ParseError("empty field", line, column);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec == std::errc::result_out_of_range) throw ParseError("integer out of range", line, column);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("not an integer: '" + std::string(field) + "'", line, column);
  }
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

MassGrid parse_csv_grid(std::istream& in) {
  std::vector<Mass> masses;
  std::int64_t rows = 0;
  std::int64_t cols = -1;
  std::string line;
  std::int64_t line_no = 0;
  std::int64_t blank_run = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) {
      ++blank_run;
      continue;
    }
    if (blank_run > 0 && rows > 0) throw ParseError("blank line inside the grid", line_no - 1, 1);
    blank_run = 0;

    std::int64_t col = 0;
    std::string_view rest = content;
    while (true) {
      const auto comma = rest.find(',');
      const auto field = rest.substr(0, comma);
      ++col;
      const auto v = parse_int(field, line_no, col);
      if (v < 0) throw ParseError("negative mass", line_no, col);
      masses.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols < 0) {
      cols = col;
    } else if (col != cols) {
      throw ParseError("ragged row: expected " + std::to_string(cols) + " values, found " +
                           std::to_string(col),
                       line_no, std::min(col, cols) + 1);
    }
    ++rows;
  }
  if (in.bad()) throw IoError("read failure");
  if (rows == 0) throw ParseError("no data", line_no, 1);
  return MassGrid{GridShape({rows, cols}), std::move(masses)};
}

MassGrid load_csv_grid(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return parse_csv_grid(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

DiscreteMeasure load_csv_measure(const std::filesystem::path& path, IncrementMode mode) {
  auto grid = load_csv_grid(path);
  if (mode == IncrementMode::kIncrementAll) {
    for (auto& v : grid.masses) {
      if (__builtin_add_overflow(v, Mass{1}, &v)) throw OverflowError("mass overflow");
    }
  }
  return DiscreteMeasure(std::move(grid.shape), std::move(grid.masses));
}

void write_csv_measure(std::ostream& out, const DiscreteMeasure& m) {
  if (m.shape().rank() != 2) throw InvalidArgument("CSV measures are two-dimensional");
  const auto cols = m.shape().extent(1);
  for (std::int64_t k = 0; k < m.shape().size(); ++k) {
    out << m.mass(k) << ((k + 1) % cols == 0 ? '\n' : ',');
  }
}

void write_csv_measure(const std::filesystem::path& path, const DiscreteMeasure& m) {
  auto out = open_out(path);
  write_csv_measure(out, m);
  if (!out) throw IoError("write failure on " + path.string());
}

GridShape parse_shape(const std::string& text) {
  std::vector<std::int64_t> dims;
  std::string_view rest = text;
  while (true) {
    const auto x = rest.find('x');
    dims.push_back(parse_int(rest.substr(0, x), 2, static_cast<std::int64_t>(dims.size()) + 1));
    if (x == std::string_view::npos) break;
    rest.remove_prefix(x + 1);
  }
  return GridShape(std::move(dims));
}

void write_plan(std::ostream& out, const TransportPlan& plan) {
  out << "# gridot-plan v1\n";
  out << "# source " << plan.source_shape().to_string() << " target "
      << plan.target_shape().to_string() << '\n';
  for (const auto& e : plan.entries()) out << e.source << ',' << e.target << ',' << e.mass << '\n';
}

void write_plan(const std::filesystem::path& path, const TransportPlan& plan) {
  auto out = open_out(path);
  write_plan(out, plan);
  if (!out) throw IoError("write failure on " + path.string());
}

TransportPlan read_plan(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "# gridot-plan v1") {
    throw ParseError("missing '# gridot-plan v1' header", 1, 1);
  }
  if (!std::getline(in, line)) throw ParseError("missing shape line", 2, 1);
  std::istringstream shapes{std::string(trim(line))};
  std::string hash, src_kw, src, tgt_kw, tgt;
  if (!(shapes >> hash >> src_kw >> src >> tgt_kw >> tgt) || hash != "#" || src_kw != "source" ||
      tgt_kw != "target") {
    throw ParseError("malformed shape line", 2, 1);
  }
  const auto source_shape = parse_shape(src);
  const auto target_shape = parse_shape(tgt);

  std::vector<PlanEntry> entries;
  std::int64_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) continue;
    std::string_view rest = content;
    std::int64_t v[3];
    for (int k = 0; k < 3; ++k) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (k == 2)) {
        throw ParseError("expected three comma-separated values", line_no, k + 1);
      }
      v[k] = parse_int(rest.substr(0, comma), line_no, k + 1);
      if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
    }
    entries.push_back({v[0], v[1], v[2]});
  }
  return TransportPlan(source_shape, target_shape, std::move(entries));
}

TransportPlan read_plan(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_plan(in);
}

}  // namespace gridot
