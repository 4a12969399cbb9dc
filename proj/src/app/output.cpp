#include "semifit/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "semifit/transform.hpp"

namespace semifit {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_solution_csv(std::ostream& os, const Solution& sol, const TransformedProblem& tp, const SpatialGrid& grid) {
  os << kSolutionHeader << '\n';
  std::vector<std::string> xi_text, z_text;
  for (int i = 0; i < grid.node_count(); ++i) {
    const double xi = grid.node(i);
    xi_text.push_back(format_double(xi));
    z_text.push_back(xi >= 1.0 ? "inf" : format_double(xi_to_z(tp.a(), xi)));
  }
  for (const auto& snap : sol.snapshots) {
    const std::string t = format_double(snap.t);
    for (int i = 0; i < grid.node_count(); ++i) {
      for (int s = 0; s < snap.c.species(); ++s) {
        os << t << ',' << i + 1 << ',' << xi_text[static_cast<std::size_t>(i)] << ',' << z_text[static_cast<std::size_t>(i)]
           << ',' << s + 1 << ',' << format_double(snap.c(s, i)) << '\n';
      }
    }
  }
}

void write_rates_csv(std::ostream& os, const RateTable& table) {
  os << "xi";
  for (std::size_t s = 0; s < table.rates.size(); ++s) os << ",n" << s + 1;
  os << '\n';
  for (std::size_t k = 0; k < table.xi.size(); ++k) {
    os << format_double(table.xi[k]);
    for (const auto& col : table.rates) os << ',' << (col[k] ? format_double(*col[k]) : "nan");
    os << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace semifit
