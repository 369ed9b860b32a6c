#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace fddb360 {

namespace {

constexpr double kDomainSlack = 1e-6;

// Points that land marginally outside the disc, from upstream clipping or
// from coordinates serialized at a handful of decimals, are pulled back onto
// the unit circle; anything further out is rejected.
NormPoint check_disc(NormPoint q, const char* where) {
  const double r2 = q.x * q.x + q.y * q.y;
  if (r2 > 1.0) {
    const double r = std::sqrt(r2);
    if (r > 1.0 + kDomainSlack) {
      throw_domain(std::string(where) + ": point outside unit disc, radius " +
                   std::to_string(r));
    }
    q.x /= r;
    q.y /= r;
  }
  return q;
}

}  // namespace

double max_warp_radius() { return std::exp(-0.25); }

NormPoint square_to_disc(NormPoint p) {
  if (std::max(std::abs(p.x), std::abs(p.y)) > 1.0 + 1e-9) {
    throw_domain("square_to_disc: point outside unit square");
  }
  p.x = std::clamp(p.x, -1.0, 1.0);
  p.y = std::clamp(p.y, -1.0, 1.0);
  return {p.x * std::sqrt(1.0 - p.y * p.y / 2.0),
          p.y * std::sqrt(1.0 - p.x * p.x / 2.0)};
}

NormPoint disc_to_square(NormPoint q) {
  q = check_disc(q, "disc_to_square");
  // Rationalized form of the closed-form inverse
  //   x = sqrt(2+x'^2-y'^2+2*sqrt(2)x')/2 - sqrt(2+x'^2-y'^2-2*sqrt(2)x')/2
  // which avoids the subtractive cancellation near the axes.  The radicands
  // reach zero at the four corners and may go slightly negative in floating
  // point; those are clamped.
  const double sq2 = std::sqrt(2.0);
  auto rad = [](double v) {
    if (v < 0.0) {
      if (v < -1e-9) throw_domain("disc_to_square: negative radicand");
      v = 0.0;
    }
    return std::sqrt(v);
  };
  const double ax = 2.0 + q.x * q.x - q.y * q.y;
  const double ay = 2.0 - q.x * q.x + q.y * q.y;
  const double dx = 2.0 * sq2 * q.x;
  const double dy = 2.0 * sq2 * q.y;
  const double denx = rad(ax + dx) + rad(ax - dx);
  const double deny = rad(ay + dy) + rad(ay - dy);
  NormPoint out;
  out.x = denx > 0.0 ? 2.0 * sq2 * q.x / denx : 0.0;
  out.y = deny > 0.0 ? 2.0 * sq2 * q.y / deny : 0.0;
  out.x = std::clamp(out.x, -1.0, 1.0);
  out.y = std::clamp(out.y, -1.0, 1.0);
  return out;
}

NormPoint squeeze(NormPoint q) {
  q = check_disc(q, "squeeze");
  const double r2 = q.x * q.x + q.y * q.y;
  const double s = std::exp(-r2 / 4.0);
  return {q.x * s, q.y * s};
}

NormPoint unsqueeze(NormPoint s) {
  const double rho = std::hypot(s.x, s.y);
  const double rho_max = max_warp_radius();
  // Inputs rounded to a handful of decimals can land just above the true
  // maximum; those clamp to the unit radius.
  if (rho > rho_max + 1e-6) {
    throw_domain("unsqueeze: radius " + std::to_string(rho) +
                 " above attainable maximum");
  }
  if (rho == 0.0) return {0.0, 0.0};
  if (rho >= rho_max) return {s.x / rho, s.y / rho};

  // rho = r*exp(-r^2/4) is strictly increasing on [0,1] (derivative
  // exp(-r^2/4)*(1-r^2/2) > 0), so Newton from r = rho converges from below;
  // bisection guards the rare overshoot.
  double lo = rho;
  double hi = 1.0;
  double r = rho;
  for (int i = 0; i < 100; ++i) {
    const double e = std::exp(-r * r / 4.0);
    const double f = r * e - rho;
    const double df = e * (1.0 - r * r / 2.0);
    double next = r - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (f > 0.0) {
      hi = r;
    } else {
      lo = r;
    }
    const double step = std::abs(next - r);
    r = next;
    if (step < 1e-12) break;
  }
  const double scale = r / rho;
  return {s.x * scale, s.y * scale};
}

NormPoint forward_warp(NormPoint p) { return squeeze(square_to_disc(p)); }

NormPoint pixel_to_norm(PixelPoint p, double side) {
  return {2.0 * p.col / side - 1.0, 2.0 * p.row / side - 1.0};
}

PixelPoint norm_to_pixel(NormPoint p, double side) {
  return {(p.x + 1.0) * side / 2.0, (p.y + 1.0) * side / 2.0};
}

}  // namespace fddb360
