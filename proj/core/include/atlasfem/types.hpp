#ifndef ATLASFEM_TYPES_HPP
#define ATLASFEM_TYPES_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <set>

namespace atlasfem {

/// Voxel / cell label. Unsigned 32-bit covers every integer type the NRRD
/// subset admits without overflow; 0 is background by convention.
using Label = std::uint32_t;

/// Set of positive labels, the operand of label algebra and queries.
using LabelSet = std::set<Label>;

using NodeId = std::uint32_t;

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// 3x3 matrix stored as three column vectors (column i = direction of
/// logical image axis i in physical space).
struct Mat3 {
  std::array<Vec3, 3> col{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  static Mat3 identity() { return Mat3{}; }

  Vec3 mul(const Vec3& v) const {
    return {col[0][0] * v[0] + col[1][0] * v[1] + col[2][0] * v[2],
            col[0][1] * v[0] + col[1][1] * v[1] + col[2][1] * v[2],
            col[0][2] * v[0] + col[1][2] * v[1] + col[2][2] * v[2]};
  }

  double det() const { return dot(col[0], cross(col[1], col[2])); }

  /// Solves M x = v by Cramer's rule; caller guarantees det != 0.
  Vec3 solve(const Vec3& v) const {
    const double d = det();
    const Mat3 mx{{v, col[1], col[2]}};
    const Mat3 my{{col[0], v, col[2]}};
    const Mat3 mz{{col[0], col[1], v}};
    return {mx.det() / d, my.det() / d, mz.det() / d};
  }

  bool operator==(const Mat3&) const = default;
};

}  // namespace atlasfem

#endif
