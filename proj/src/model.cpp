#include "rumin/model.hpp"

#include <cmath>
#include <numbers>

namespace rumin::model {

using ext::CoframeIndex;
using ext::PointwiseForm;

namespace {

// Rows: complex frame vectors (T, W_i, W̄_i) in terms of the real frame.
Mat complex_frame_matrix(int n) {
  const int s = 2 * n + 1;
  Mat p = Mat::Zero(s, s);
  p(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int x = 2 * i - 1, y = 2 * i;
    p(i, x) = 0.5;
    p(i, y) = cplx(0, -0.5);
    p(n + i, x) = 0.5;
    p(n + i, y) = cplx(0, 0.5);
  }
  return p;
}

}  // namespace

FrameStructure::FrameStructure(int n, std::vector<double> brackets, Eigen::MatrixXd j_matrix)
    : n_(n), c_(std::move(brackets)), j_(std::move(j_matrix)) {
  if (n < 1 || n > ext::kMaxN) throw DimensionError("frame dimension out of range");
  const int s = size();
  if (c_.size() != static_cast<std::size_t>(s) * s * s)
    throw DimensionError("bracket table has the wrong size");
  if (j_.rows() != 2 * n || j_.cols() != 2 * n) throw DimensionError("J must be 2n x 2n");

  const Mat p = complex_frame_matrix(n);
  const Mat pinv = p.inverse();
  cc_.assign(c_.size(), cplx{});
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      for (int ra = 0; ra < s; ++ra)
        for (int rb = 0; rb < s; ++rb) {
          const cplx w = p(a, ra) * p(b, rb);
          if (w == cplx{}) continue;
          for (int rc = 0; rc < s; ++rc) {
            const double k = bracket(ra, rb, rc);
            if (k == 0.0) continue;
            for (int c = 0; c < s; ++c) cc_[idx(a, b, c)] += w * k * pinv(rc, c);
          }
        }

  for (int c = 0; c < s; ++c) {
    PointwiseForm form(n);
    for (int a = 0; a < s; ++a)
      for (int b = a + 1; b < s; ++b) {
        const cplx k = complex_bracket(a, b, c);
        if (k == cplx{}) continue;
        form.add(CoframeIndex::from_mask(n, (1u << a) | (1u << b)), -k);
      }
    dcoframe_.push_back(std::move(form));
  }
}

std::vector<FrameStructure::Check> FrameStructure::validate(double tol) const {
  const int s = size();
  const int h = 2 * n_;
  std::vector<Check> out;
  auto add = [&](std::string name, double r) { out.push_back({std::move(name), r, r <= tol}); };

  double anti = 0.0;
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      for (int c = 0; c < s; ++c) anti = std::max(anti, std::abs(bracket(a, b, c) + bracket(b, a, c)));
  add("antisymmetry", anti);

  double jacobi = 0.0;
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      for (int e = 0; e < s; ++e)
        for (int f = 0; f < s; ++f) {
          double sum = 0.0;
          for (int d = 0; d < s; ++d)
            sum += bracket(a, b, d) * bracket(d, e, f) + bracket(b, e, d) * bracket(d, a, f) +
                   bracket(e, a, d) * bracket(d, b, f);
          jacobi = std::max(jacobi, std::abs(sum));
        }
  add("jacobi", jacobi);

  // θ∧(dθ)^n = n! · vol for an orthonormal frame; a nonzero multiple is the contact condition.
  PointwiseForm top = PointwiseForm::theta(n_);
  double factorial = 1.0;
  for (int i = 1; i <= n_; ++i) {
    top = ext::wedge(top, dtheta_form());
    factorial *= i;
  }
  add("contact", (top - factorial * ext::volume_form(n_)).max_abs());

  double reeb = 0.0;
  for (int a = 0; a < s; ++a) reeb = std::max(reeb, std::abs(dtheta(0, a)));
  add("reeb", reeb);

  double metric = 0.0;
  for (int a = 0; a < h; ++a)
    for (int b = 0; b < h; ++b) {
      double g = 0.0;
      for (int c = 0; c < h; ++c) g += dtheta(a + 1, c + 1) * j_(c, b);
      metric = std::max(metric, std::abs(g - (a == b ? 1.0 : 0.0)));
    }
  add("metric", metric);

  add("complex_structure", (j_ * j_ + Eigen::MatrixXd::Identity(h, h)).cwiseAbs().maxCoeff());

  Eigen::MatrixXd ad_t(h, h);
  for (int a = 0; a < h; ++a)
    for (int c = 0; c < h; ++c) ad_t(c, a) = bracket(0, a + 1, c + 1);
  add("reeb_preserves_J", (ad_t * j_ - j_ * ad_t).cwiseAbs().maxCoeff());

  double integrable = 0.0;
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      for (int c = 0; c < s; ++c)
        if (c == 0 || c > n_) integrable = std::max(integrable, std::abs(complex_bracket(i, j, c)));
  add("cr_integrable", integrable);

  // The complex frame must be the ±i eigenvectors of J: J(X − iY) = i(X − iY).
  double standard = 0.0;
  for (int i = 0; i < n_; ++i) {
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(h);
    w(2 * i) = 1.0;
    w(2 * i + 1) = cplx(0, -1);
    const Eigen::VectorXcd jw = j_.cast<cplx>() * w;
    standard = std::max(standard, (jw - kI * w).cwiseAbs().maxCoeff());
  }
  add("standard_J", standard);
  return out;
}

bool FrameStructure::is_valid(double tol) const {
  for (const auto& c : validate(tol))
    if (!c.pass) return false;
  return true;
}

nlohmann::json FrameStructure::to_json() const {
  nlohmann::json brackets = nlohmann::json::array();
  const int s = size();
  for (int a = 0; a < s; ++a)
    for (int b = a + 1; b < s; ++b)
      for (int c = 0; c < s; ++c)
        if (bracket(a, b, c) != 0.0) brackets.push_back({a, b, c, bracket(a, b, c)});
  nlohmann::json j = nlohmann::json::array();
  for (int r = 0; r < j_.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < j_.cols(); ++c) row.push_back(j_(r, c));
    j.push_back(row);
  }
  return {{"n", n_}, {"brackets", brackets}, {"J", j}};
}

FrameStructure su2_frame() {
  std::vector<double> c(27, 0.0);
  auto set = [&](int a, int b, int k, double v) {
    c[(a * 3 + b) * 3 + k] = v;
    c[(b * 3 + a) * 3 + k] = -v;
  };
  set(1, 2, 0, -1.0);  // [X, Y] = −T
  set(0, 1, 2, -2.0);  // [T, X] = −2Y
  set(0, 2, 1, 2.0);   // [T, Y] = 2X
  Eigen::MatrixXd j(2, 2);
  j << 0.0, -1.0, 1.0, 0.0;
  return FrameStructure(1, std::move(c), std::move(j));
}

SpinMatrices spin_matrices(int m) {
  if (m < 0) throw ParameterError("negative representation weight");
  const int d = m + 1;
  SpinMatrices s;
  s.jz = Mat::Zero(d, d);
  s.jplus = Mat::Zero(d, d);
  s.jminus = Mat::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    const int w = m - 2 * r;  // twice the weight
    s.jz(r, r) = 0.5 * w;
    if (r > 0) s.jplus(r - 1, r) = 0.5 * std::sqrt(static_cast<double>(m * (m + 2) - w * (w + 2)));
    if (r < m) s.jminus(r + 1, r) = 0.5 * std::sqrt(static_cast<double>(m * (m + 2) - w * (w - 2)));
  }
  s.jx = 0.5 * (s.jplus + s.jminus);
  s.jy = cplx(0, -0.5) * (s.jplus - s.jminus);
  return s;
}

namespace {

// Left-invariant frame fields on V_m: ρ(T) = 2i J_z, ρ(X) = −i√2 J_x, ρ(Y) = −i√2 J_y.
std::vector<Mat> frame_representation(int m) {
  const auto s = spin_matrices(m);
  const cplx k(0, -std::numbers::sqrt2);
  return {cplx(0, 2) * s.jz, k * s.jx, k * s.jy};
}

Mat select_kron(const std::vector<int>& rows, const Mat& a) {
  const Eigen::Index d = a.rows();
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  Mat out = Mat::Zero(r * d, r * d);
  for (Eigen::Index i = 0; i < r; ++i) out.block(i * d, i * d, d, d) = a;
  return out;
}

}  // namespace

double su2_volume(const FrameStructure& frame) {
  const auto rep = frame_representation(1);
  const int s = frame.size();
  Eigen::MatrixXd g(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) g(a, b) = 0.5 * (rep[a].adjoint() * rep[b]).trace().real();
  return 2.0 * std::numbers::pi * std::numbers::pi / std::sqrt(g.determinant());
}

ModelManifold ModelManifold::su2() { return ModelManifold(su2_frame(), 1, 0, false); }

ModelManifold ModelManifold::lens(int p, FlatBundle bundle) {
  if (p < 1) throw ParameterError("lens space order must be >= 1, got " + std::to_string(p));
  if (bundle.character < 0 || bundle.character >= p)
    throw ParameterError("character " + std::to_string(bundle.character) + " is not in 0.." +
                         std::to_string(p - 1));
  return ModelManifold(su2_frame(), p, bundle.character, true);
}

double ModelManifold::volume() const { return su2_volume(frame_) / p_; }

std::vector<int> ModelManifold::equivariant_rows(int m) const {
  std::vector<int> rows;
  for (int u = 0; u <= m; ++u) {
    const int w = m - 2 * u;
    if (((w - character_) % p_ + p_) % p_ == 0) rows.push_back(u);
  }
  return rows;
}

Mat ModelManifold::generator_action(int m) const {
  const int d = m + 1;
  const double angle = 2.0 * std::numbers::pi / p_;
  Mat left = Mat::Zero(d, d);
  for (int u = 0; u < d; ++u) left(u, u) = std::polar(1.0, angle * (m - 2 * u));
  return la::kron_identity(left, d);
}

FunctionBlock ModelManifold::block(int m) const {
  if (m < 0) throw ParameterError("negative block weight");
  FunctionBlock b;
  b.weight = m;
  b.character = character_;
  b.left_indices = equivariant_rows(m);
  b.dim = static_cast<int>(b.left_indices.size()) * (m + 1);
  const auto rep = frame_representation(m);
  for (const auto& r : rep) b.real_actions.push_back(select_kron(b.left_indices, r));
  const Mat& t = b.real_actions[0];
  const Mat& x = b.real_actions[1];
  const Mat& y = b.real_actions[2];
  b.complex_actions = {t, 0.5 * (x - kI * y), 0.5 * (x + kI * y)};
  return b;
}

std::vector<FunctionBlock> ModelManifold::blocks(int max_weight) const {
  if (max_weight < 0) throw ParameterError("max_weight must be >= 0");
  std::vector<FunctionBlock> out;
  for (int m = 0; m <= max_weight; ++m) {
    auto b = block(m);
    if (b.dim > 0) out.push_back(std::move(b));
  }
  return out;
}

nlohmann::json ModelManifold::descriptor(int max_weight) const {
  return {{"model", lens_ ? "lens" : "s3"},
          {"p", p_},
          {"character", character_},
          {"max_weight", max_weight},
          {"volume", volume()},
          {"frame", frame_.to_json()}};
}

}  // namespace rumin::model
