#include "sector_blowup/numerics.hpp"

#include <array>
#include <limits>
#include <map>
#include <mutex>

namespace sector_blowup {

double integrate_uniform(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (v[0] + v[1]);
  const std::size_t intervals = n - 1;
  KahanSum s;
  std::size_t start = 0;
  if (intervals % 2 != 0) {
    if (intervals < 3) {  // exactly handled above; defensive
      return 0.5 * h * (v[0] + v[1]);
    }
    // 3/8 rule on the first three intervals, Simpson on the rest.
    s.add(3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]));
    start = 3;
  }
  for (std::size_t i = start; i + 2 < n; i += 2) {
    s.add(h / 3.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]));
  }
  return s.value();
}

double integrate_uniform_range(const std::vector<double>& v, double h,
                               std::size_t i0, std::size_t i1) {
  assert(i1 < v.size() && i0 <= i1);
  std::vector<double> sub(v.begin() + static_cast<std::ptrdiff_t>(i0),
                          v.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
  return integrate_uniform(sub, h);
}

std::vector<double> solve_tridiagonal(std::vector<double> lower,
                                      std::vector<double> diag,
                                      std::vector<double> upper,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() + 1 != n || upper.size() + 1 != n || rhs.size() != n) {
    throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    const double m = lower[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  if (diag[n - 1] == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  }
  return x;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
  // Fornberg (1988), SIAM Rev. 30: recursive generation of FD weights.
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n) + 1,
                                     std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
              c1 * (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                    c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) / c2;
        }
        c[static_cast<std::size_t>(i)][0] =
            -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
             k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) / c3;
      }
      c[static_cast<std::size_t>(j)][0] *= c4 / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = c[i][static_cast<std::size_t>(m)];
  return w;
}

namespace {

GaussRule make_gauss(int order) {
  // Newton iteration on Legendre polynomials.
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_gauss(order)).first;
  return it->second;
}

int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

double parallel_max(std::size_t n, int threads,
                    const std::function<double(std::size_t, std::size_t)>& chunk_max) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const int nt = std::max(1, std::min(threads, static_cast<int>(n)));
  if (nt == 1) return chunk_max(0, n);
  std::vector<double> partial(static_cast<std::size_t>(nt));
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + static_cast<std::size_t>(nt) - 1) / static_cast<std::size_t>(nt);
  for (int t = 0; t < nt; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, t, lo, hi] { partial[static_cast<std::size_t>(t)] = lo < hi ? chunk_max(lo, hi) : -std::numeric_limits<double>::infinity(); });
  }
  for (auto& th : pool) th.join();
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace sector_blowup
