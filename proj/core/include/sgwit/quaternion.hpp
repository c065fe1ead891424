#pragma once

#include <gmpxx.h>

#include <optional>

namespace sgwit {

/// Quaternion over the rationals: w + x*i + y*j + z*k. Multiplication is
/// noncommutative; every nonzero element is invertible via conj/norm.
struct Quaternion {
  mpq_class w, x, y, z;

  Quaternion() : w(0), x(0), y(0), z(0) {}
  Quaternion(mpq_class w_, mpq_class x_, mpq_class y_, mpq_class z_)
      : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  bool is_zero() const { return w == 0 && x == 0 && y == 0 && z == 0; }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  bool operator==(const Quaternion& o) const { return w == o.w && x == o.x && y == o.y && z == o.z; }
  bool operator!=(const Quaternion& o) const { return !(*this == o); }

  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  mpq_class norm() const { return w * w + x * x + y * y + z * z; }

  std::optional<Quaternion> inverse() const {
    if (is_zero()) return std::nullopt;
    const mpq_class n = norm();
    return Quaternion{w / n, -x / n, -y / n, -z / n};
  }
};

}  // namespace sgwit
