// CSV snapshot files: "x,value" for Eulerian fields and
// "x,eta,eta_jacobian,zeta" for Lagrangian states. Numbers are written with
// 17 significant digits so that doubles round-trip exactly.
#ifndef NOVIKOV_SNAPSHOT_IO_HPP
#define NOVIKOV_SNAPSHOT_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "novikov/spectral.hpp"

namespace novikov {

class FormatError : public Error {
 public:
  using Error::Error;
};

/// Formats a double with 17 significant digits; non-finite values as "nan",
/// "inf" or "-inf".
std::string format_number(double v);

void write_field_csv(std::ostream& out, const PeriodicField& field);
void write_field_csv(const std::filesystem::path& path, const PeriodicField& field);

/// Reads an "x,value" file. The grid size is the row count; x must match the
/// uniform grid j/n to 1e-12.
PeriodicField read_field_csv(std::istream& in);
PeriodicField read_field_csv(const std::filesystem::path& path);

struct LagrangianSnapshot {
  std::vector<double> x;
  std::vector<double> eta;
  std::vector<double> eta_jacobian;
  std::vector<double> zeta;
};

void write_lagrangian_csv(const std::filesystem::path& path, const LagrangianSnapshot& snap);
LagrangianSnapshot read_lagrangian_csv(const std::filesystem::path& path);

/// Generic helpers shared by the diagnostics and harness readers.
std::vector<std::string> split_csv_line(const std::string& line);
double parse_number(const std::string& token);

}  // namespace novikov

#endif  // NOVIKOV_SNAPSHOT_IO_HPP
