#include "sector_blowup/angular.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sector_blowup/numerics.hpp"

namespace sector_blowup {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
}

AngularGrid::AngularGrid(double half_angle, std::size_t n)
    : half_angle_(half_angle), n_(n) {
  if (!(half_angle > 0.0) || half_angle >= kHalfPi) {
    throw std::invalid_argument(
        "AngularGrid: half angle must lie in (0, pi/2); the angular elliptic "
        "problem loses coercivity at pi/2");
  }
  if (n < 3) throw std::invalid_argument("AngularGrid: need at least 3 nodes");
  h_ = half_angle / static_cast<double>(n - 1);
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = static_cast<double>(i) * h_;
  nodes_.back() = half_angle;
}

AngularGrid make_grid(double half_angle, std::size_t n) {
  return AngularGrid(half_angle, n);
}

ThetaField::ThetaField(AngularGrid grid, std::vector<double> values, Parity parity)
    : grid_(std::move(grid)), values_(std::move(values)), parity_(parity) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("ThetaField: value count does not match grid");
  }
  if (parity_ == Parity::Odd) {
    double scale = 0.0;
    for (double v : values_) scale = std::max(scale, std::abs(v));
    if (std::abs(values_[0]) > 1e-12 * std::max(1.0, scale)) {
      throw std::invalid_argument("ThetaField: odd field must vanish at theta = 0");
    }
    values_[0] = 0.0;
  }
}

ThetaField ThetaField::zeros(const AngularGrid& grid, Parity parity) {
  return ThetaField(grid, std::vector<double>(grid.size(), 0.0), parity);
}

double ThetaField::value_at(double theta) const {
  const double L = grid_.half_angle();
  double sign = 1.0;
  if (theta < 0.0) {
    theta = -theta;
    if (parity_ == Parity::Odd) sign = -1.0;
  }
  if (theta > L) {
    if (theta > L + 1e-12 * std::max(1.0, L)) {
      throw std::out_of_range("ThetaField::value_at: angle outside [-L, L]");
    }
    theta = L;
  }
  const std::size_t n = grid_.size();
  const double h = grid_.spacing();
  // Cubic Lagrange on 4 nodes around theta; shift the stencil at the ends.
  std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(theta / h)) - 1;
  i0 = std::max<std::ptrdiff_t>(0, std::min<std::ptrdiff_t>(i0, static_cast<std::ptrdiff_t>(n) - 4));
  if (n < 4) i0 = 0;
  const std::size_t m = std::min<std::size_t>(4, n);
  double result = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t ia = static_cast<std::size_t>(i0) + a;
    double basis = 1.0;
    for (std::size_t b = 0; b < m; ++b) {
      if (b == a) continue;
      const std::size_t ib = static_cast<std::size_t>(i0) + b;
      basis *= (theta - grid_.node(ib)) / (grid_.node(ia) - grid_.node(ib));
    }
    result += basis * values_[ia];
  }
  return sign * result;
}

double ThetaField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ThetaField ThetaField::derivative() const {
  const std::size_t n = grid_.size();
  const double h = grid_.spacing();
  const double ghost_sign = (parity_ == Parity::Odd) ? -1.0 : 1.0;
  auto at = [&](std::ptrdiff_t i) -> double {
    if (i < 0) return ghost_sign * values_[static_cast<std::size_t>(-i)];
    return values_[static_cast<std::size_t>(i)];
  };
  std::vector<double> d(n);
  if (n < 5) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i);
      if (i + 1 < n) {
        d[i] = (at(j + 1) - at(j - 1)) / (2.0 * h);
      } else {
        d[i] = (values_[i] - values_[i - 1]) / h;
      }
    }
  } else {
    for (std::size_t i = 0; i + 2 < n; ++i) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i);
      d[i] = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h);
    }
    const std::size_t i1 = n - 2;
    d[i1] = (-values_[i1 - 3] + 6.0 * values_[i1 - 2] - 18.0 * values_[i1 - 1] +
             10.0 * values_[i1] + 3.0 * values_[i1 + 1]) / (12.0 * h);
    const std::size_t i2 = n - 1;
    d[i2] = (3.0 * values_[i2 - 4] - 16.0 * values_[i2 - 3] + 36.0 * values_[i2 - 2] -
             48.0 * values_[i2 - 1] + 25.0 * values_[i2]) / (12.0 * h);
  }
  const Parity flipped = (parity_ == Parity::Odd) ? Parity::Even : Parity::Odd;
  if (flipped == Parity::Odd) d[0] = 0.0;
  return ThetaField(grid_, std::move(d), flipped);
}

double ThetaField::integral() const {
  return integrate_uniform(values_, grid_.spacing());
}

namespace {

void validate_sample(const PlanarSample& s) {
  if (s.size() < 2) throw std::invalid_argument("PlanarSample: need at least 2 points");
  if (s.x1.size() != s.size() || s.x2.size() != s.size()) {
    throw std::invalid_argument("PlanarSample: coordinate/value size mismatch");
  }
  if (!(s.alpha > 0.0) || s.alpha > 1.0) {
    throw std::invalid_argument("PlanarSample: alpha must lie in (0, 1]");
  }
}

// Max Holder quotient of w over all pairs; throws on coincident points with
// differing w.
double pair_seminorm(const PlanarSample& s, const std::vector<double>& w,
                     int threads) {
  const std::size_t n = s.size();
  const double alpha = s.alpha;
  if (threads <= 0) threads = default_thread_count();
  // Coincident points with differing values flag the quotient as ill-posed;
  // signalled with an infinity from the worker and rethrown here.
  const double m = parallel_max(n, threads, [&](std::size_t lo, std::size_t hi) {
    double local = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = s.x1[i] - s.x1[j];
        const double dy = s.x2[i] - s.x2[j];
        const double dist = std::hypot(dx, dy);
        const double dv = std::abs(w[i] - w[j]);
        if (dist == 0.0) {
          if (dv > 0.0) return std::numeric_limits<double>::infinity();
          continue;
        }
        local = std::max(local, dv / std::pow(dist, alpha));
      }
    }
    return local;
  });
  if (std::isinf(m)) {
    throw std::invalid_argument(
        "holder seminorm: coincident points with differing values");
  }
  return m;
}

}  // namespace

double holder_norm(const PlanarSample& sample, int threads) {
  validate_sample(sample);
  double sup = 0.0;
  for (double v : sample.values) sup = std::max(sup, std::abs(v));
  return sup + pair_seminorm(sample, sample.values, threads);
}

double holder_seminorm(const PlanarSample& sample, int threads) {
  validate_sample(sample);
  return pair_seminorm(sample, sample.values, threads);
}

double ring_holder_norm(const PlanarSample& sample, int k,
                        const std::vector<double>* derivative_values,
                        int threads) {
  validate_sample(sample);
  if (k < 0) throw std::invalid_argument("ring_holder_norm: negative order");
  if (k >= 1 && derivative_values == nullptr) {
    throw std::invalid_argument(
        "ring_holder_norm: k >= 1 requires caller-supplied derivative samples");
  }
  const std::vector<double>& d = (k == 0) ? sample.values : *derivative_values;
  if (d.size() != sample.size()) {
    throw std::invalid_argument("ring_holder_norm: derivative sample size mismatch");
  }
  const double p = static_cast<double>(k) + sample.alpha;
  std::vector<double> w(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double r = std::hypot(sample.x1[i], sample.x2[i]);
    if (r == 0.0) {
      w[i] = 0.0;  // the |x|^{k+alpha} weight vanishes at the origin
    } else {
      w[i] = std::pow(r, p) * d[i];
    }
  }
  double sup = 0.0;
  for (double v : sample.values) sup = std::max(sup, std::abs(v));
  return sup + pair_seminorm(sample, w, threads);
}

double product_rule_probe(const PlanarSample& f, const PlanarSample& h,
                          double alpha, int threads) {
  validate_sample(f);
  validate_sample(h);
  if (f.size() != h.size()) {
    throw std::invalid_argument("product_rule_probe: samples must share points");
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.x1[i] != h.x1[i] || f.x2[i] != h.x2[i]) {
      throw std::invalid_argument("product_rule_probe: samples must share points");
    }
    if (std::hypot(f.x1[i], f.x2[i]) == 0.0 && std::abs(f.values[i]) > 1e-14) {
      throw std::invalid_argument("product_rule_probe: f must vanish at the origin");
    }
  }
  PlanarSample fc = f;
  fc.alpha = alpha;
  PlanarSample hc = h;
  hc.alpha = alpha;
  PlanarSample prod = fc;
  for (std::size_t i = 0; i < prod.size(); ++i) prod.values[i] = fc.values[i] * hc.values[i];

  const double nf = holder_norm(fc, threads);
  const double nh = ring_holder_norm(hc, 0, nullptr, threads);
  if (nf == 0.0 || nh == 0.0) return 0.0;
  return holder_norm(prod, threads) / (nf * nh);
}

double field_holder_norm(const ThetaField& field, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("field_holder_norm: alpha must lie in (0, 1]");
  }
  const std::size_t n = field.grid().size();
  const double h = field.grid().spacing();
  // Full interval [-L, L] by parity reflection.
  std::vector<double> theta(2 * n - 1), v(2 * n - 1);
  const double sign = (field.parity() == Parity::Odd) ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    theta[n - 1 + i] = static_cast<double>(i) * h;
    v[n - 1 + i] = field[i];
    theta[n - 1 - i] = -static_cast<double>(i) * h;
    v[n - 1 - i] = sign * field[i];
  }
  double sup = 0.0, semi = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sup = std::max(sup, std::abs(v[i]));
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      semi = std::max(semi, std::abs(v[i] - v[j]) / std::pow(theta[j] - theta[i], alpha));
    }
  }
  return sup + semi;
}

}  // namespace sector_blowup
