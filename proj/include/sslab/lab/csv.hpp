#pragma once

#include <cstddef>
#include <istream>
#include <string>

#include "sslab/core.hpp"

namespace sslab::lab {

/// Header `x,y`, then one integer pair per line. Symbols must lie in the
/// declared alphabets; any violation throws ParseError with its line number.
JointCounts read_labeled_csv(std::istream& in, std::size_t kx, std::size_t ky);

/// Header `x`, then one integer per line.
Counts read_unlabeled_csv(std::istream& in, std::size_t kx);

JointCounts read_labeled_file(const std::string& path, std::size_t kx, std::size_t ky);
Counts read_unlabeled_file(const std::string& path, std::size_t kx);

}  // namespace sslab::lab
