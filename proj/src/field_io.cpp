#include "cma/field_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace cma::grid {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);  // little-endian host
}
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

}  // namespace

void dump_field(const ScalarField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(errc::invalid_input, "dump_field: cannot open " + path);
  const Grid& g = f.grid();
  os.write("CMAF", 4);
  put_u32(os, kFormatVersion);
  put_u32(os, std::uint32_t(g.kind()));
  put_u32(os, std::uint32_t(g.base_n()));
  put_u32(os, std::uint32_t(g.naxes()));
  for (int a = 0; a < g.naxes(); ++a) put_u32(os, std::uint32_t(g.axis(a).res));
  for (int a = 0; a < g.naxes(); ++a) {
    const Axis& ax = g.axis(a);
    put_f64(os, ax.lo);
    put_f64(os, ax.periodic ? ax.len : ax.lo + ax.len);
  }
  os.write(reinterpret_cast<const char*>(f.data()),
           std::streamsize(sizeof(double) * f.size()));
  if (!os) fail(errc::internal, "dump_field: write failed for " + path);
}

ScalarField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(errc::invalid_input, "load_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "CMAF", 4) != 0)
    fail(errc::invalid_input, "load_field: bad magic in " + path);
  const std::uint32_t version = get_u32(is);
  if (version != kFormatVersion) fail(errc::invalid_input, "load_field: unknown version");
  const auto kind = GridKind(get_u32(is));
  const int n = int(get_u32(is));
  const int naxes = int(get_u32(is));
  std::vector<int> res(naxes);
  for (int a = 0; a < naxes; ++a) res[a] = int(get_u32(is));
  std::vector<Axis> axes(naxes);
  for (int a = 0; a < naxes; ++a) {
    const double lo = get_f64(is), second = get_f64(is);
    const bool periodic =
        kind == GridKind::torus || (kind == GridKind::product && a < naxes - 1);
    axes[a] = periodic ? Axis{res[a], lo, second, true}
                       : Axis{res[a], lo, second - lo, false};
  }
  Grid g(kind, n, std::move(axes));
  ScalarField f(g);
  is.read(reinterpret_cast<char*>(f.data()), std::streamsize(sizeof(double) * f.size()));
  if (!is) fail(errc::invalid_input, "load_field: truncated payload in " + path);
  return f;
}

void export_csv(const ScalarField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) fail(errc::invalid_input, "export_csv: cannot open " + path);
  const Grid& g = f.grid();
  for (int a = 0; a < g.naxes(); ++a) std::fprintf(fp, "x%d,", a);
  std::fprintf(fp, "value\n");
  std::vector<double> x(g.naxes());
  Walker w(g);
  for (std::size_t p = 0; p < g.count(); ++p, w.advance()) {
    g.coords(w.mi(), x.data());
    for (int a = 0; a < g.naxes(); ++a) std::fprintf(fp, "%.17g,", x[a]);
    std::fprintf(fp, "%.17g\n", f[p]);
  }
  std::fclose(fp);
}

}  // namespace cma::grid
