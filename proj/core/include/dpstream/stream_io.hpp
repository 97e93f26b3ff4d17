#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpstream/types.hpp"

namespace dpstream {

// CSV with header `t,x1,...,xd[,label]`. Rows must be time-ordered and of
// fixed width. Malformed input throws ParseError with the 1-based line.
class StreamReader {
 public:
  explicit StreamReader(std::istream& in);
  std::size_t dim() const { return dim_; }
  bool has_labels() const { return labels_; }
  std::optional<StreamPoint> next();
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t dim_ = 0;
  bool labels_ = false;
  std::size_t line_ = 0;
  bool have_prev_ = false;
  Timestamp prev_t_ = 0.0;
  std::string buf_;
};

struct StreamData {
  std::size_t dim = 0;
  bool has_labels = false;
  std::vector<StreamPoint> points;
};

StreamData read_stream(std::istream& in);
StreamData read_stream_file(const std::string& path);

void write_stream_header(std::ostream& out, std::size_t dim, bool labels);
void write_stream_row(std::ostream& out, const StreamPoint& p);
void write_stream(std::ostream& out, const StreamData& data);

// Shortest round-trip decimal form, locale independent.
std::string format_double(double x);

}  // namespace dpstream
