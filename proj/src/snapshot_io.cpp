#include "novikov/snapshot_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace novikov {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& token) {
  std::string t;
  for (char c : token)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t == "nan") return std::nan("");
  if (t == "inf") return HUGE_VAL;
  if (t == "-inf") return -HUGE_VAL;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw FormatError("not a number: '" + token + "'");
  return v;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

void expect_header(std::istream& in, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw FormatError("expected header '" + expected + "', got '" + line + "'");
}

}  // namespace

void write_field_csv(std::ostream& out, const PeriodicField& field) {
  out << "x,value\n";
  for (int j = 0; j < field.size(); ++j)
    out << format_number(field.grid().point(j)) << ',' << format_number(field[j]) << '\n';
}

void write_field_csv(const std::filesystem::path& path, const PeriodicField& field) {
  auto out = open_out(path);
  write_field_csv(out, field);
}

PeriodicField read_field_csv(std::istream& in) {
  expect_header(in, "x,value");
  std::vector<double> xs, vs;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cols = split_csv_line(line);
    if (cols.size() != 2)
      throw FormatError("line " + std::to_string(lineno) + ": expected 2 columns");
    xs.push_back(parse_number(cols[0]));
    vs.push_back(parse_number(cols[1]));
  }
  const int n = static_cast<int>(vs.size());
  PeriodicGrid grid(n);
  for (int j = 0; j < n; ++j)
    if (std::abs(xs[j] - grid.point(j)) > 1e-12)
      throw FormatError("row " + std::to_string(j) + ": x is not on the uniform grid");
  return PeriodicField(grid, std::move(vs));
}

PeriodicField read_field_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_field_csv(in);
}

void write_lagrangian_csv(const std::filesystem::path& path, const LagrangianSnapshot& snap) {
  auto out = open_out(path);
  out << "x,eta,eta_jacobian,zeta\n";
  for (std::size_t j = 0; j < snap.x.size(); ++j)
    out << format_number(snap.x[j]) << ',' << format_number(snap.eta[j]) << ','
        << format_number(snap.eta_jacobian[j]) << ',' << format_number(snap.zeta[j]) << '\n';
}

LagrangianSnapshot read_lagrangian_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_header(in, "x,eta,eta_jacobian,zeta");
  LagrangianSnapshot s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cols = split_csv_line(line);
    if (cols.size() != 4) throw FormatError("expected 4 columns in lagrangian snapshot");
    s.x.push_back(parse_number(cols[0]));
    s.eta.push_back(parse_number(cols[1]));
    s.eta_jacobian.push_back(parse_number(cols[2]));
    s.zeta.push_back(parse_number(cols[3]));
  }
  return s;
}

}  // namespace novikov
