#include "ruinopt/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace ruinopt::numerics {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment &o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)> &f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1)
      gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  double error = std::abs((kronrod - gauss) * half);
  // Floor at roundoff level so the loop terminates on exact rules.
  error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() *
                              std::abs(value));
  return {a, b, value, error};
}

} // namespace

Integral integrate(const std::function<double(double)> &f, double a, double b,
                   double abs_tol, std::span<const double> cuts,
                   int max_intervals) {
  if (!(b >= a))
    throw std::domain_error("integrate: b < a");
  if (a == b)
    return {};

  std::vector<double> edges{a};
  for (double c : cuts)
    if (c > a && c < b)
      edges.push_back(c);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  std::priority_queue<Segment> heap;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] == edges[i])
      continue;
    Segment s = gk15(f, edges[i], edges[i + 1]);
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  int count = static_cast<int>(heap.size());
  while (total_err > abs_tol && count < max_intervals) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      break; // interval exhausted at machine resolution
    heap.pop();
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  // Re-sum from the partition to shed accumulated update rounding.
  double value = 0.0, error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error};
}

double find_root(const std::function<double(double)> &f, double a, double b,
                 double x_tol) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0)
    return a;
  if (fb == 0.0)
    return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw std::domain_error("find_root: root not bracketed");

  const double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 400; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0)
      return b;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        // secant
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        // inverse quadratic interpolation
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0)
        q = -q;
      else
        p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

} // namespace ruinopt::numerics
