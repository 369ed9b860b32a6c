#pragma once

// Coordinate mathematics for the fisheye-style warp.
//
// A square patch is addressed in normalized coordinates: the patch center is
// (0,0) and the corners are (+-1,+-1).  The forward warp is the elliptical
// grid mapping of the unit square onto the unit disc, followed by a radial
// "squeeze" scale exp(-r^2/4) that compresses content towards the perimeter.
// The content of a warped patch therefore fills a disc of radius exp(-1/4),
// not the full unit disc.

namespace fddb360 {

// Dimensionless point, either in the square domain (max(|x|,|y|) <= 1) or the
// disc domain (x^2 + y^2 <= 1).
struct NormPoint {
  double x = 0.0;
  double y = 0.0;
};

// Continuous pixel coordinates; the center of pixel (i,j) is (i+0.5, j+0.5).
struct PixelPoint {
  double col = 0.0;
  double row = 0.0;
};

// Radius of the content disc produced by forward_warp (= exp(-1/4)).
double max_warp_radius();

// Elliptical grid mapping of the unit square onto the unit disc.
NormPoint square_to_disc(NormPoint p);

// Closed-form inverse of square_to_disc.
NormPoint disc_to_square(NormPoint q);

// Radial barrel compression (x,y) -> (x,y) * exp(-r^2/4).
NormPoint squeeze(NormPoint q);

// Inverse of squeeze; solves rho = r*exp(-r^2/4) for r in [0,1].
NormPoint unsqueeze(NormPoint s);

// squeeze(square_to_disc(p)); the full distortion applied to one point.
NormPoint forward_warp(NormPoint p);

// Pixel <-> normalized conversions for a square patch of side `side`.
NormPoint pixel_to_norm(PixelPoint p, double side);
PixelPoint norm_to_pixel(NormPoint p, double side);

}  // namespace fddb360
