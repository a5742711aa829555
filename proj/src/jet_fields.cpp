#include "spraykit/jet_fields.hpp"

#include <stdexcept>

namespace spraykit {

JetEndo::JetEndo(std::size_t dim, std::size_t nvars) : dim_(dim), data_(dim * dim, Jet3(nvars)) {}

JetEndo JetEndo::constant(const Eigen::MatrixXd& m, std::size_t nvars) {
  if (m.rows() != m.cols()) throw std::invalid_argument("endomorphism matrix must be square");
  JetEndo k(static_cast<std::size_t>(m.rows()), nvars);
  for (std::size_t r = 0; r < k.dim_; ++r)
    for (std::size_t c = 0; c < k.dim_; ++c) k(r, c) = Jet3::constant(m(r, c), nvars);
  return k;
}

JetVector JetEndo::column(std::size_t c) const {
  JetVector v;
  v.reserve(dim_);
  for (std::size_t r = 0; r < dim_; ++r) v.push_back((*this)(r, c));
  return v;
}

void JetEndo::set_column(std::size_t c, const JetVector& v) {
  for (std::size_t r = 0; r < dim_; ++r) (*this)(r, c) = v[r];
}

Eigen::MatrixXd JetEndo::value() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = (*this)(r, c).value();
  return m;
}

JetVector coordinate_field(std::size_t index, std::size_t dim, std::size_t nvars) {
  JetVector v(dim, Jet3(nvars));
  v[index] = Jet3::constant(1.0, nvars);
  return v;
}

JetVector apply_endo(const JetEndo& k, const JetVector& x) {
  const std::size_t d = k.dim();
  JetVector out;
  out.reserve(d);
  for (std::size_t r = 0; r < d; ++r) {
    Jet3 acc(x[0].nvars());
    for (std::size_t c = 0; c < d; ++c) acc += k(r, c) * x[c];
    out.push_back(std::move(acc));
  }
  return out;
}

JetVector add(const JetVector& a, const JetVector& b) {
  JetVector out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

JetVector sub(const JetVector& a, const JetVector& b) {
  JetVector out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

JetVector scale(const JetVector& a, double s) {
  JetVector out(a);
  for (auto& c : out) c *= s;
  return out;
}

Eigen::VectorXd value(const JetVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].value();
  return out;
}

JetVector lie_bracket(const JetVector& x, const JetVector& y) {
  const std::size_t d = x.size();
  if (y.size() != d) throw std::invalid_argument("lie bracket of fields with different dimensions");
  const std::size_t nv = x[0].nvars();
  JetVector out;
  out.reserve(d);
  for (std::size_t a = 0; a < d; ++a) {
    Jet3 acc(nv);
    for (std::size_t b = 0; b < d; ++b) {
      acc += x[b] * y[a].derivative(b);
      acc -= y[b] * x[a].derivative(b);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

JetEndo fn_bracket(const JetEndo& k, const JetVector& x) {
  const std::size_t d = k.dim();
  const std::size_t nv = x[0].nvars();
  JetEndo out(d, nv);
  for (std::size_t c = 0; c < d; ++c) {
    const JetVector y = coordinate_field(c, d, nv);
    const JetVector col = sub(lie_bracket(apply_endo(k, y), x), apply_endo(k, lie_bracket(y, x)));
    out.set_column(c, col);
  }
  return out;
}

JetVector fn_bracket(const JetEndo& k, const JetEndo& l, std::size_t a, std::size_t b) {
  const std::size_t d = k.dim();
  const std::size_t nv = k(0, 0).nvars();
  const JetVector x = coordinate_field(a, d, nv);
  const JetVector y = coordinate_field(b, d, nv);
  const JetVector kx = k.column(a), ky = k.column(b);
  const JetVector lx = l.column(a), ly = l.column(b);
  JetVector out = sub(lie_bracket(kx, ly), lie_bracket(ky, lx));
  out = sub(out, apply_endo(l, sub(lie_bracket(kx, y), lie_bracket(ky, x))));
  out = sub(out, apply_endo(k, sub(lie_bracket(x, ly), lie_bracket(y, lx))));
  // [d_a, d_b] = 0, so the (LK + KL)[X,Y] term drops out on coordinate pairs.
  return out;
}

}  // namespace spraykit
