#include "dpstream/stream_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "dpstream/error.hpp"

namespace dpstream {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError(line, "not a finite number: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

StreamReader::StreamReader(std::istream& in) : in_(in) {
  if (!std::getline(in_, buf_)) throw ParseError(1, "missing header");
  line_ = 1;
  const auto cols = split(strip_cr(buf_));
  if (cols.empty() || cols[0] != "t") throw ParseError(1, "header must start with 't'");
  std::size_t n = cols.size();
  if (cols.back() == "label") {
    labels_ = true;
    --n;
  }
  if (n < 2) throw ParseError(1, "header names no coordinate columns");
  for (std::size_t i = 1; i < n; ++i) {
    if (cols[i] != "x" + std::to_string(i)) {
      throw ParseError(1, "expected column 'x" + std::to_string(i) + "', got '" + std::string(cols[i]) + "'");
    }
  }
  dim_ = n - 1;
}

std::optional<StreamPoint> StreamReader::next() {
  while (std::getline(in_, buf_)) {
    ++line_;
    const auto text = strip_cr(buf_);
    if (text.empty()) continue;
    const auto fields = split(text);
    const std::size_t want = 1 + dim_ + (labels_ ? 1 : 0);
    if (fields.size() != want) {
      throw ParseError(line_, "expected " + std::to_string(want) + " fields, got " + std::to_string(fields.size()));
    }
    StreamPoint p;
    p.t = parse_number(fields[0], line_);
    if (have_prev_ && p.t < prev_t_) throw ParseError(line_, "timestamp goes backwards");
    have_prev_ = true;
    prev_t_ = p.t;
    p.coords.reserve(dim_);
    for (std::size_t i = 0; i < dim_; ++i) p.coords.push_back(parse_number(fields[1 + i], line_));
    if (labels_) p.label = std::string(fields.back());
    return p;
  }
  return std::nullopt;
}

StreamData read_stream(std::istream& in) {
  StreamReader reader(in);
  StreamData data;
  data.dim = reader.dim();
  data.has_labels = reader.has_labels();
  while (auto p = reader.next()) data.points.push_back(std::move(*p));
  return data;
}

StreamData read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stream: " + path);
  return read_stream(in);
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_stream_header(std::ostream& out, std::size_t dim, bool labels) {
  out << 't';
  for (std::size_t i = 1; i <= dim; ++i) out << ",x" << i;
  if (labels) out << ",label";
  out << '\n';
}

void write_stream_row(std::ostream& out, const StreamPoint& p) {
  out << format_double(p.t);
  for (double x : p.coords) out << ',' << format_double(x);
  if (p.label) out << ',' << *p.label;
  out << '\n';
}

void write_stream(std::ostream& out, const StreamData& data) {
  write_stream_header(out, data.dim, data.has_labels);
  for (const auto& p : data.points) write_stream_row(out, p);
}

}  // namespace dpstream
