#ifndef CTOPT_CSV_HPP
#define CTOPT_CSV_HPP

#include <string>
#include <vector>

namespace ctopt {

// Shortest round-trip decimal form of a double ("%.17g" trimmed), so CSV
// output is byte-stable and parses back to the identical value.
std::string fmt_double(double value);

std::vector<std::string> split_csv_line(const std::string& line);

} // namespace ctopt

#endif // CTOPT_CSV_HPP
