#pragma once

#include "domsplit/mat2.hpp"

namespace domsplit {

/// Point of CP^1 stored as a unit vector. The affine coordinate is z2/z1,
/// so e1 is 0 and e2 is infinity. The largest entry is real and >= 0.
class ProjPoint {
 public:
  ProjPoint() : rep_(cplx(1), cplx(0)) {}
  explicit ProjPoint(const Vec2& v);

  static ProjPoint from_affine(cplx z);
  static ProjPoint infinity() { return ProjPoint(Vec2(cplx(0), cplx(1))); }

  const Vec2& rep() const noexcept { return rep_; }
  bool is_infinity() const noexcept { return rep_(0) == cplx(0); }
  /// Infinite real part for the point at infinity.
  cplx to_affine() const;

 private:
  Vec2 rep_;
};

/// 2 |det(v, w)| for unit representatives, in [0, 2].
double chordal_dist(const ProjPoint& p, const ProjPoint& q);

/// Chordal distance between affine points; infinity allowed.
double chordal_dist_affine(cplx z, cplx w);

/// Projective action. Throws UndefinedAction when p spans ker A.
ProjPoint act(const Mat2& A, const ProjPoint& p);

/// z -> (c + d z) / (a + b z) for A = [[a, b], [c, d]].
cplx act_affine(const Mat2& A, cplx z);

/// Disk, half-plane or disk exterior in the affine chart.
struct GenCircle {
  enum class Kind { disk, half_plane, exterior_disk };
  Kind kind = Kind::disk;
  cplx center{0};
  double radius = 0;
  /// Half-plane: boundary point and unit normal pointing into the region.
  cplx line_point{0};
  cplx line_normal{1};

  bool contains(cplx z) const;
};

/// Image of the closed disk D_alpha under A.
GenCircle mobius_disk_image(const Mat2& A, double alpha);

struct Containment {
  bool contained = false;
  /// alpha' - (|center| + radius); -inf for unbounded images.
  double margin = 0;
};

Containment contained_in_disk(const GenCircle& g, double alpha_prime);

/// Contraction factor of the hyperbolic metric of D_alpha restricted to
/// D_alpha' (alpha' < alpha).
double schwarz_pick_rho(double alpha, double alpha_prime);

/// Lower bound on the chordal distance between D_alpha' and the
/// complement of D_alpha.
double separation_constant(double alpha, double alpha_prime);

}  // namespace domsplit
