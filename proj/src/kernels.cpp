#include "rumin/kernels.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace rumin::kernels {


void configure_threads() {
  Eigen::setNbThreads(1);
  if (const char* env = std::getenv("RUMIN_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) omp_set_num_threads(t);
    } catch (const std::exception&) {
      // Unparsable values leave the runtime default in place.
    }
  }
}

int max_threads() { return omp_get_max_threads(); }

namespace {

struct Entry {
  Eigen::Index row;
  cplx value;
};

std::vector<std::vector<Entry>> column_entries(const Mat& b) {
  std::vector<std::vector<Entry>> cols(static_cast<std::size_t>(b.cols()));
  for (Eigen::Index c = 0; c < b.cols(); ++c)
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      if (b(r, c) != cplx{}) cols[static_cast<std::size_t>(c)].push_back({r, b(r, c)});
  return cols;
}

void sandwich_block(const Mat& a, const std::vector<Entry>& tcol, const std::vector<Entry>& scol,
                    Eigen::Index dim, Eigen::Index r, Eigen::Index s, Mat& out) {
  auto dst = out.block(r * dim, s * dim, dim, dim);
  for (const auto& t : tcol)
    for (const auto& u : scol) dst += (std::conj(t.value) * u.value) * a.block(t.row * dim, u.row * dim, dim, dim);
}

}  // namespace

Mat kron_sandwich(const Mat& a, const Mat& bt, const Mat& bs, Eigen::Index dim, Exec exec) {
  if (a.rows() != bt.rows() * dim || a.cols() != bs.rows() * dim)
    throw std::invalid_argument("kron_sandwich: shape mismatch");
  const auto tcols = column_entries(bt);
  const auto scols = column_entries(bs);
  const Eigen::Index rt = bt.cols();
  const Eigen::Index rs = bs.cols();
  Mat out = Mat::Zero(rt * dim, rs * dim);
  const long long total = static_cast<long long>(rt * rs);
  if (exec == Exec::Serial) {
    for (long long q = 0; q < total; ++q)
      sandwich_block(a, tcols[q / rs], scols[q % rs], dim, q / rs, q % rs, out);
  } else {
#pragma omp parallel for schedule(static)
    for (long long q = 0; q < total; ++q)
      sandwich_block(a, tcols[q / rs], scols[q % rs], dim, q / rs, q % rs, out);
  }
  return out;
}

Mat kron_lift(const Mat& p, Eigen::Index dim, Exec exec) {
  Mat out = Mat::Zero(p.rows() * dim, p.cols() * dim);
  const long long rows = static_cast<long long>(p.rows());
  auto row = [&](long long r) {
    for (Eigen::Index c = 0; c < p.cols(); ++c)
      if (p(r, c) != cplx{}) out.block(r * dim, c * dim, dim, dim).diagonal().setConstant(p(r, c));
  };
  if (exec == Exec::Serial) {
    for (long long r = 0; r < rows; ++r) row(r);
  } else {
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < rows; ++r) row(r);
  }
  return out;
}

}  // namespace rumin::kernels
