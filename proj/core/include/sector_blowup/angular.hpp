#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sector_blowup {

enum class Parity { Odd, Even };

// Uniform angular grid on [0, L], 0 < L < pi/2. Fields live on the half
// interval; values on [-L, 0) are reconstructed through the parity tag.
class AngularGrid {
 public:
  AngularGrid(double half_angle, std::size_t n);

  double half_angle() const { return half_angle_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  double node(std::size_t i) const { return static_cast<double>(i) * h_; }
  const std::vector<double>& nodes() const { return nodes_; }

  bool operator==(const AngularGrid& other) const {
    return half_angle_ == other.half_angle_ && n_ == other.n_;
  }

 private:
  double half_angle_;
  std::size_t n_;
  double h_;
  std::vector<double> nodes_;
};

// Sampled scalar function of the angle with a parity tag.
class ThetaField {
 public:
  ThetaField(AngularGrid grid, std::vector<double> values, Parity parity);

  static ThetaField zeros(const AngularGrid& grid, Parity parity);
  // Sample a callable profile(theta) on the grid nodes.
  template <typename F>
  static ThetaField sample(const AngularGrid& grid, Parity parity, F&& profile) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = profile(grid.node(i));
    return ThetaField(grid, std::move(v), parity);
  }

  const AngularGrid& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Value at any theta in [-L, L]: parity reflection plus cubic interpolation
  // between grid nodes.
  double value_at(double theta) const;

  double max_abs() const;

  // 4th-order first derivative on the grid; parity ghosts across theta = 0,
  // biased stencils at the theta = L end. The derivative of an odd field is
  // even and vice versa.
  ThetaField derivative() const;

  // Composite quadrature of the field over [0, L].
  double integral() const;

 private:
  AngularGrid grid_;
  std::vector<double> values_;
  Parity parity_;
};

// Point-sampled planar function with a Holder exponent attached.
struct PlanarSample {
  std::vector<double> x1, x2;
  std::vector<double> values;
  double alpha = 0.5;

  std::size_t size() const { return values.size(); }
};

// make_grid: uniform grid factory with the coercivity-limit guard L < pi/2.
AngularGrid make_grid(double half_angle, std::size_t n);

// Discrete C^alpha norm: sup|f| + sup over all point pairs of the Holder
// quotient. Brute-force pair scan; this is the literal definition.
double holder_norm(const PlanarSample& sample, int threads = 0);

// Seminorm part alone (no sup term).
double holder_seminorm(const PlanarSample& sample, int threads = 0);

// Discrete scale-invariant Holder norm:
//   ||f||_inf + C*^alpha-seminorm of |x|^{k+alpha} d
// where d = f for k = 0 and d = caller-supplied k-th derivative samples
// for k >= 1 (NaN entries at the origin are allowed; the weight vanishes
// there and the contribution is dropped).
double ring_holder_norm(const PlanarSample& sample, int k = 0,
                        const std::vector<double>* derivative_values = nullptr,
                        int threads = 0);

// Measured constant of the product rule: ||f h||_Ca / (||h||_ring * ||f||_Ca).
// Requires f to vanish at the origin sample; returns 0 when either factor
// norm vanishes.
double product_rule_probe(const PlanarSample& f, const PlanarSample& h,
                          double alpha, int threads = 0);

// 1D C^{0,alpha} norm of a ThetaField profile over the full interval [-L, L].
double field_holder_norm(const ThetaField& field, double alpha);

}  // namespace sector_blowup
