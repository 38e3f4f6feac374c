#include "greyshot/params_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace greyshot::io {

namespace {

void write_rows(std::ostream& out, const std::vector<double>& values, std::size_t rows,
                std::size_t k) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      if (c) out << ' ';
      out << values[r * k + c];
    }
    out << '\n';
  }
}

}  // namespace

void write_params(std::ostream& out, const model::GreyShotParams& params) {
  out << std::setprecision(17);
  out << "greyshot-params v1 " << params.m << ' ' << params.n << ' ' << params.k << ' '
      << params.a << ' ' << params.b << '\n';
  write_rows(out, params.u, params.m, params.k);
  write_rows(out, params.v, params.n, params.k);
}

void write_params(const std::filesystem::path& path, const model::GreyShotParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_params(out, params);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

model::GreyShotParams read_params(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("params: missing header");
  std::istringstream hs(header);
  std::string magic, version;
  model::GreyShotParams p;
  if (!(hs >> magic >> version >> p.m >> p.n >> p.k >> p.a >> p.b) ||
      magic != "greyshot-params" || version != "v1") {
    throw std::runtime_error("params: expected 'greyshot-params v1 M N K a b' header");
  }
  p.u.resize(p.m * p.k);
  p.v.resize(p.n * p.k);
  for (double& x : p.u) {
    if (!(in >> x)) throw std::runtime_error("params: truncated U block");
  }
  for (double& x : p.v) {
    if (!(in >> x)) throw std::runtime_error("params: truncated V block");
  }
  std::string extra;
  if (in >> extra) throw std::runtime_error("params: trailing data after V block");
  return p;
}

model::GreyShotParams read_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_params(in);
}

}  // namespace greyshot::io
