#include "plap/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "plap/error.hpp"

namespace plap {
namespace {

// 15-point Kronrod abscissae; odd indices are the 7-point Gauss nodes.
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
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[jtw] = v1;
    f2[jtw] = v2;
    resg += kWg[j] * (v1 + v2);
    resk += kWgk[jtw] * (v1 + v2);
    resabs += kWgk[jtw] * (std::abs(v1) + std::abs(v2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[jtwm1] = v1;
    f2[jtwm1] = v2;
    resk += kWgk[jtwm1] * (v1 + v2);
    resabs += kWgk[jtwm1] * (std::abs(v1) + std::abs(v2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
  }
  Segment s{a, b, resk * half, std::abs((resk - resg) * half)};
  resabs *= abs_half;
  resasc *= abs_half;
  if (resasc != 0.0 && s.error != 0.0) {
    s.error = resasc * std::min(1.0, std::pow(200.0 * s.error / resasc, 1.5));
  }
  if (resabs > uflow / (50.0 * eps)) {
    s.error = std::max(50.0 * eps * resabs, s.error);
  }
  if (!std::isfinite(s.value) || !std::isfinite(s.error)) {
    std::ostringstream os;
    os << "non-finite integrand on [" << a << ", " << b << "]";
    fail(ErrorCode::QuadratureFailure, os.str());
  }
  return s;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
  QuadratureResult result;
  if (a == b) {
    return result;
  }
  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  result.evaluations = 15;
  auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

  while (error > tolerance()) {
    if (static_cast<int>(heap.size()) >= options.max_intervals) {
      std::ostringstream os;
      os << "tolerance " << tolerance() << " not met on [" << a << ", " << b << "], error " << error
         << " after " << heap.size() << " intervals";
      fail(ErrorCode::QuadratureFailure, os.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
      fail(ErrorCode::QuadratureFailure, "interval bisection exhausted floating-point resolution");
    }
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running totals.
  result.value = 0.0;
  result.error = 0.0;
  result.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    result.value += heap.top().value;
    result.error += heap.top().error;
    heap.pop();
  }
  return result;
}

QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  std::span<const double> breaks, const QuadratureOptions& options) {
  QuadratureResult result;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto part = integrate(f, breaks[i], breaks[i + 1], options);
    result.value += part.value;
    result.error += part.error;
    result.evaluations += part.evaluations;
    result.intervals += part.intervals;
  }
  return result;
}

std::vector<double> log_breaks(double a, double b, int per_decade) {
  if (!(a > 0.0) || !(b > a)) {
    fail(ErrorCode::InvalidInput, "log_breaks needs 0 < a < b");
  }
  const int panels = std::max(1, static_cast<int>(std::ceil(std::log10(b / a) * per_decade)));
  std::vector<double> breaks(static_cast<std::size_t>(panels) + 1);
  const double step = std::log(b / a) / panels;
  for (int i = 0; i <= panels; ++i) {
    breaks[static_cast<std::size_t>(i)] = a * std::exp(step * i);
  }
  breaks.front() = a;
  breaks.back() = b;
  return breaks;
}

}  // namespace plap
