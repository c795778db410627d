#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace harmonica {

using Complex = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

inline constexpr Complex kI{0.0, 1.0};

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double norm_inf() const {
    return std::max({std::abs(x), std::abs(y), std::abs(z)});
  }
  Vec3 normalized() const { return *this / norm(); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Triple of chart coefficients (phi_1, phi_2, phi_3) of a vectorial 1-form.
using CTriple = std::array<Complex, 3>;

inline CTriple operator+(const CTriple& a, const CTriple& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline CTriple operator*(const Complex& s, const CTriple& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

// Hopf coefficient h = sum phi_j^2.
inline Complex hopf_coefficient(const CTriple& phi) {
  return phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2];
}

// Klotz density |phi|^2 = sum |phi_j|^2.
inline double klotz_of(const CTriple& phi) {
  return std::norm(phi[0]) + std::norm(phi[1]) + std::norm(phi[2]);
}

// Unnormalized normal Im(phi2 conj(phi3), phi3 conj(phi1), phi1 conj(phi2));
// equals X_u x X_v for X_u = Re phi, X_v = -Im phi.
inline Vec3 normal_vector(const CTriple& phi) {
  return {std::imag(phi[1] * std::conj(phi[2])),
          std::imag(phi[2] * std::conj(phi[0])),
          std::imag(phi[0] * std::conj(phi[1]))};
}

inline Complex dot(const Vec3& n, const CTriple& phi) {
  return n.x * phi[0] + n.y * phi[1] + n.z * phi[2];
}

struct Mat3 {
  double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  static Mat3 identity() { return {}; }

  Vec3 apply(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  CTriple apply(const CTriple& p) const {
    return {m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2],
            m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2],
            m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2]};
  }
  Mat3 transposed() const {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.m[i][j] = m[j][i];
    return t;
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        r.m[i][j] = 0;
        for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
      }
    return r;
  }

  // Rotation about the y-axis: (x,y,z) -> (x cos + z sin, y, -x sin + z cos).
  static Mat3 rot_y(double theta) {
    Mat3 r;
    double c = std::cos(theta), s = std::sin(theta);
    r.m[0][0] = c; r.m[0][2] = s;
    r.m[2][0] = -s; r.m[2][2] = c;
    return r;
  }
  static Mat3 rot_x(double theta) {
    Mat3 r;
    double c = std::cos(theta), s = std::sin(theta);
    r.m[1][1] = c; r.m[1][2] = -s;
    r.m[2][1] = s; r.m[2][2] = c;
    return r;
  }
  static Mat3 rot_z(double theta) {
    Mat3 r;
    double c = std::cos(theta), s = std::sin(theta);
    r.m[0][0] = c; r.m[0][1] = -s;
    r.m[1][0] = s; r.m[1][1] = c;
    return r;
  }

  // Rotation taking the unit vector n to (0,0,1) (Rodrigues about n x e3).
  static Mat3 rotation_to_north(const Vec3& n);
};

inline Mat3 Mat3::rotation_to_north(const Vec3& n) {
  Vec3 e3{0, 0, 1};
  Vec3 axis = n.cross(e3);
  double s = axis.norm();
  double c = n.dot(e3);
  if (s < 1e-14) {
    if (c > 0) return identity();
    return rot_x(kPi);  // n = -e3
  }
  axis = axis / s;
  // R = I + sin K + (1-cos) K^2 with K the cross-product matrix of axis.
  Mat3 k{};
  k.m[0][0] = 0; k.m[1][1] = 0; k.m[2][2] = 0;
  k.m[0][1] = -axis.z; k.m[0][2] = axis.y;
  k.m[1][0] = axis.z; k.m[1][2] = -axis.x;
  k.m[2][0] = -axis.y; k.m[2][1] = axis.x;
  Mat3 r = identity();
  Mat3 k2 = k * k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.m[i][j] += s * k.m[i][j] + (1 - c) * k2.m[i][j];
  return r;
}

}  // namespace harmonica
