#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qadia {

/// Shortest round-trip decimal form of a double (17 significant digits),
/// with lowercase "inf"/"nan" literals. Deterministic for identical inputs.
std::string format_num(double v);

/// Minimal RFC-4180-style CSV emitter: header row mandatory, "." decimal
/// separator, rows terminated by "\n".
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& vals);

private:
    std::ostream& out_;
};

}  // namespace qadia
