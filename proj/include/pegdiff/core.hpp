#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

namespace pegdiff {

using Vec6d = Eigen::Matrix<double, 6, 1>;
using Mat6d = Eigen::Matrix<double, 6, 6>;

// Safety saturation limits for commanded/reported wrenches.
constexpr double kMaxForce = 50.0;    // N, per component
constexpr double kMaxTorque = 10.0;   // N*m, per component
constexpr double kMaxLinVel = 1.0;    // m/s, norm
constexpr double kMaxAngVel = 10.0;   // rad/s, norm

inline double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

// 6-DoF force/torque in the EE frame: fx fy fz tx ty tz.
struct Wrench6 {
  std::array<double, 6> v{};

  double& fx() { return v[0]; }
  double& fy() { return v[1]; }
  double& fz() { return v[2]; }
  double& tx() { return v[3]; }
  double& ty() { return v[4]; }
  double& tz() { return v[5]; }
  double fx() const { return v[0]; }
  double fy() const { return v[1]; }
  double fz() const { return v[2]; }
  double tx() const { return v[3]; }
  double ty() const { return v[4]; }
  double tz() const { return v[5]; }

  Eigen::Vector3d force() const { return {v[0], v[1], v[2]}; }
  Eigen::Vector3d torque() const { return {v[3], v[4], v[5]}; }

  static Wrench6 from(const Eigen::Vector3d& f, const Eigen::Vector3d& t) {
    return Wrench6{{f.x(), f.y(), f.z(), t.x(), t.y(), t.z()}};
  }
  static Wrench6 from(const Vec6d& w) {
    return Wrench6{{w[0], w[1], w[2], w[3], w[4], w[5]}};
  }
  Vec6d vec() const { return Vec6d(v.data()); }

  bool finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }

  Wrench6 operator+(const Wrench6& o) const {
    Wrench6 r;
    for (int i = 0; i < 6; ++i) r.v[i] = v[i] + o.v[i];
    return r;
  }
  Wrench6 operator-(const Wrench6& o) const {
    Wrench6 r;
    for (int i = 0; i < 6; ++i) r.v[i] = v[i] - o.v[i];
    return r;
  }
  Wrench6 operator*(double s) const {
    Wrench6 r;
    for (int i = 0; i < 6; ++i) r.v[i] = v[i] * s;
    return r;
  }
};

// Component clamp to the safety limits. Saturation is always this explicit
// call; nothing clamps silently.
inline Wrench6 saturate(const Wrench6& w, bool* clipped = nullptr) {
  Wrench6 r = w;
  bool any = false;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(r.v[i]) > kMaxForce) {
      r.v[i] = std::copysign(kMaxForce, r.v[i]);
      any = true;
    }
  }
  for (int i = 3; i < 6; ++i) {
    if (std::abs(r.v[i]) > kMaxTorque) {
      r.v[i] = std::copysign(kMaxTorque, r.v[i]);
      any = true;
    }
  }
  if (clipped) *clipped = any;
  return r;
}

// x y z (m) + roll pitch yaw (rad), world frame.
struct Pose6 {
  std::array<double, 6> v{};

  double& x() { return v[0]; }
  double& y() { return v[1]; }
  double& z() { return v[2]; }
  double& roll() { return v[3]; }
  double& pitch() { return v[4]; }
  double& yaw() { return v[5]; }
  double x() const { return v[0]; }
  double y() const { return v[1]; }
  double z() const { return v[2]; }
  double roll() const { return v[3]; }
  double pitch() const { return v[4]; }
  double yaw() const { return v[5]; }

  Eigen::Vector3d position() const { return {v[0], v[1], v[2]}; }
  Eigen::Matrix3d rotation() const {
    return (Eigen::AngleAxisd(v[5], Eigen::Vector3d::UnitZ()) *
            Eigen::AngleAxisd(v[4], Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(v[3], Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
  }

  void wrap() {
    for (int i = 3; i < 6; ++i) v[i] = wrap_angle(v[i]);
  }

  static Pose6 from(const Eigen::Vector3d& p, const Eigen::Matrix3d& R) {
    Pose6 out;
    out.v[0] = p.x();
    out.v[1] = p.y();
    out.v[2] = p.z();
    // ZYX euler angles
    out.v[4] = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
    out.v[3] = std::atan2(R(2, 1), R(2, 2));
    out.v[5] = std::atan2(R(1, 0), R(0, 0));
    return out;
  }
};

// linear (m/s) + angular (rad/s) velocity.
struct Twist6 {
  std::array<double, 6> v{};

  Eigen::Vector3d linear() const { return {v[0], v[1], v[2]}; }
  Eigen::Vector3d angular() const { return {v[3], v[4], v[5]}; }

  static Twist6 from(const Eigen::Vector3d& lin, const Eigen::Vector3d& ang) {
    return Twist6{{lin.x(), lin.y(), lin.z(), ang.x(), ang.y(), ang.z()}};
  }
  Vec6d vec() const { return Vec6d(v.data()); }

  bool finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

// Cartesian stiffness / damping matrices of the impedance law.
struct Gains {
  Mat6d K = Mat6d::Identity() * 523.91;
  Mat6d D = Mat6d::Identity() * 24.98;

  static Gains diagonal(double k, double d) {
    Gains g;
    g.K = Mat6d::Identity() * k;
    g.D = Mat6d::Identity() * d;
    return g;
  }

  bool valid() const {
    if (!K.allFinite() || !D.allFinite()) return false;
    if (!K.isApprox(K.transpose(), 1e-9) || !D.isApprox(D.transpose(), 1e-9)) return false;
    Eigen::SelfAdjointEigenSolver<Mat6d> ek(K), ed(D);
    return ek.eigenvalues().minCoeff() >= -1e-9 && ed.eigenvalues().minCoeff() >= -1e-9;
  }
};

}  // namespace pegdiff
