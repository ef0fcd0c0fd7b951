#include "sslab/lab/csv.hpp"

#include <charconv>
#include <fstream>
#include <vector>

#include "sslab/error.hpp"

namespace sslab::lab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_symbol(const std::string& field, std::size_t alphabet, std::size_t line,
                         const char* name) {
  const std::string t = trim(field);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError(line, "'" + t + "' is not an integer symbol");
  }
  if (v < 0 || static_cast<unsigned long long>(v) >= alphabet) {
    throw ParseError(line, std::string(name) + " symbol " + t + " outside alphabet of size " +
                         std::to_string(alphabet));
  }
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename Row>
void for_each_row(std::istream& in, const std::string& header, std::size_t columns, Row&& row) {
  std::string line;
  std::size_t number = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!seen_header) {
      std::string compact;
      for (char c : t) {
        if (c != ' ' && c != '\t') compact += c;
      }
      if (compact != header) throw ParseError(number, "expected header '" + header + "'");
      seen_header = true;
      continue;
    }
    const auto fields = split(t);
    if (fields.size() != columns) {
      throw ParseError(number, "expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()));
    }
    row(fields, number);
  }
  if (!seen_header) throw ParseError(number, "missing header '" + header + "'");
}

}  // namespace

JointCounts read_labeled_csv(std::istream& in, std::size_t kx, std::size_t ky) {
  std::vector<int> cells(kx * ky, 0);
  for_each_row(in, "x,y", 2, [&](const std::vector<std::string>& f, std::size_t line) {
    const std::size_t x = parse_symbol(f[0], kx, line, "x");
    const std::size_t y = parse_symbol(f[1], ky, line, "y");
    ++cells[x * ky + y];
  });
  return JointCounts(kx, ky, std::move(cells));
}

Counts read_unlabeled_csv(std::istream& in, std::size_t kx) {
  std::vector<int> cells(kx, 0);
  for_each_row(in, "x", 1, [&](const std::vector<std::string>& f, std::size_t line) {
    ++cells[parse_symbol(f[0], kx, line, "x")];
  });
  return Counts(std::move(cells));
}

JointCounts read_labeled_file(const std::string& path, std::size_t kx, std::size_t ky) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_labeled_csv(in, kx, ky);
}

Counts read_unlabeled_file(const std::string& path, std::size_t kx) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_unlabeled_csv(in, kx);
}

}  // namespace sslab::lab
