#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

#include "pegdiff/core.hpp"
#include "pegdiff/geometry.hpp"
#include "pegdiff/rng.hpp"

namespace pegdiff {

struct SimParams {
  double dt = 1e-3;  // 1 kHz control rate
  // virtual task-space inertia (kg, kg*m^2), diagonal
  Vec6d inertia = (Vec6d() << 2.0, 2.0, 2.0, 0.05, 0.05, 0.05).finished();
  // penalty contact model
  double contact_stiffness = 1e5;   // N/m (total across the peg bottom)
  double contact_damping = 200.0;   // N*s/m
  double friction_mu = 0.3;
  double stiction_vel = 1e-4;       // m/s, Coulomb regularization
  // wrist sensor noise on tau_ext
  bool noise_enabled = true;
  double noise_force = 0.1;    // N
  double noise_torque = 0.01;  // N*m
  int blowup_limit = 10;

  static SimParams from_config(const Config& cfg) {
    SimParams p;
    p.contact_stiffness = cfg.get_double("sim.contact_stiffness", p.contact_stiffness);
    p.contact_damping = cfg.get_double("sim.contact_damping", p.contact_damping);
    p.friction_mu = cfg.get_double("sim.friction_mu", p.friction_mu);
    p.stiction_vel = cfg.get_double("sim.stiction_vel", p.stiction_vel);
    p.noise_enabled = cfg.get_bool("sim.noise", p.noise_enabled);
    p.noise_force = cfg.get_double("sim.noise_force", p.noise_force);
    p.noise_torque = cfg.get_double("sim.noise_torque", p.noise_torque);
    return p;
  }
};

struct ContactFlags {
  bool surface_contact = false;
  bool wall_contact = false;
  double inserted_depth = 0.0;  // m, peg bottom below the plate surface
};

// Pose is the peg tip (bottom-face center); the peg extends +peg_length along
// the body z-axis. Velocities are stored in the world frame.
struct SimState {
  Eigen::Vector3d pos{0, 0, 0};
  Eigen::Quaterniond rot{1, 0, 0, 0};
  Eigen::Vector3d vel{0, 0, 0};
  Eigen::Vector3d omega{0, 0, 0};
  Pose6 desired;
  double t = 0.0;
  Wrench6 last_cmd;  // saturated task wrench currently applied (EE frame)
  ContactFlags contact;
  int blowup_count = 0;
  bool aborted = false;

  Eigen::Matrix3d rotation() const { return rot.toRotationMatrix(); }

  Pose6 pose() const { return Pose6::from(pos, rotation()); }

  Twist6 twist_ee() const {
    const Eigen::Matrix3d Rt = rotation().transpose();
    return Twist6::from(Rt * vel, Rt * omega);
  }

  static SimState start_at(const Pose6& p) {
    SimState s;
    s.pos = p.position();
    s.rot = Eigen::Quaterniond(p.rotation());
    s.desired = p;
    return s;
  }
};

// F_ff + K e + D edot, all in the EE frame. pose_err is (desired - current)
// as position offset + rotation vector, twist_err is (desired - current).
inline Wrench6 impedance_command(const Wrench6& f_ff, const Vec6d& pose_err,
                                 const Vec6d& twist_err, const Gains& gains) {
  if (!f_ff.finite() || !pose_err.allFinite() || !twist_err.allFinite())
    throw std::invalid_argument("impedance_command: non-finite input");
  return Wrench6::from(Vec6d(f_ff.vec() + gains.K * pose_err + gains.D * twist_err));
}

namespace detail {

struct ContactAccum {
  Eigen::Vector3d force{0, 0, 0};   // world
  Eigen::Vector3d torque{0, 0, 0};  // world, about the peg tip
  bool surface = false;
  bool wall = false;
};

inline void add_contact(ContactAccum& acc, const SimState& st, const SimParams& prm,
                        const Eigen::Vector3d& point, const Eigen::Vector3d& normal,
                        double pen, double k, double d) {
  const Eigen::Vector3d vp = st.vel + st.omega.cross(point - st.pos);
  const double vn = vp.dot(normal);
  double fn = k * pen - d * vn;
  if (fn <= 0.0) return;
  const Eigen::Vector3d vt = vp - vn * normal;
  const double vt_mag = vt.norm();
  Eigen::Vector3d ft = Eigen::Vector3d::Zero();
  if (vt_mag > 1e-15) {
    const double scale = std::min(1.0, vt_mag / prm.stiction_vel);
    ft = -(prm.friction_mu * fn * scale / vt_mag) * vt;
  }
  const Eigen::Vector3d f = fn * normal + ft;
  acc.force += f;
  acc.torque += (point - st.pos).cross(f);
}

}  // namespace detail

// External wrench from the penalty contact model, in the EE frame.
// Regimes: peg bottom on the plate / chamfer funnel, peg edges against the
// hole walls (sampled at the bottom and at the hole lip, so tilt produces
// opposing two-point forces), free space -> zero.
inline Wrench6 contact_wrench(const SimState& st, const SceneGeometry& geom,
                              const SimParams& prm, ContactFlags* flags = nullptr) {
  const Eigen::Matrix3d R = st.rotation();
  const Eigen::Vector3d axis = R.col(2);  // peg axis, tip -> top
  const auto samples = geom.sample_points();
  const double k = prm.contact_stiffness;
  const double d = prm.contact_damping;
  const double per_point = 1.0 / static_cast<double>(samples.size());
  const double wc = geom.chamfer_width;
  const double dc = geom.chamfer_depth;
  const double slope = dc / wc;
  const double lip_z = -dc;

  detail::ContactAccum acc;
  for (const auto& sp : samples) {
    const Eigen::Vector3d pb = st.pos + R * Eigen::Vector3d(sp.x(), sp.y(), 0.0);

    if (pb.z() < 0.0) {
      Eigen::Vector2d n_out;
      const double s = geom.hole_poly.signed_out_dist(pb.head<2>(), &n_out);
      if (s > 0.0) {
        if (pb.z() >= lip_z) {
          const double sm = geom.mouth_poly.signed_out_dist(pb.head<2>());
          if (sm >= 0.0) {
            // flat plate: distributed support
            detail::add_contact(acc, st, prm, pb, Eigen::Vector3d::UnitZ(), -pb.z(),
                                k * per_point, d * per_point);
            acc.surface = true;
          } else {
            // chamfer funnel: surface height -dc at the hole lip, 0 at the rim
            const double zsurf = -dc * (1.0 - s / wc);
            if (pb.z() < zsurf) {
              Eigen::Vector3d n(-slope * n_out.x(), -slope * n_out.y(), 1.0);
              n /= n.norm();
              const double pen = (zsurf - pb.z()) / std::sqrt(1.0 + slope * slope);
              detail::add_contact(acc, st, prm, pb, n, pen, k, d);
              acc.surface = true;
            }
          }
        } else {
          // below the lip while laterally outside the hole: vertical wall
          detail::add_contact(acc, st, prm, pb,
                              Eigen::Vector3d(-n_out.x(), -n_out.y(), 0.0), s, k, d);
          acc.wall = true;
        }
      }
    }

    // hole-lip contact along the peg edge (second point of a wedged pair)
    if (pb.z() < lip_z && axis.z() > 1e-9) {
      const double u = (lip_z - pb.z()) / axis.z();
      if (u > 0.0 && u < geom.peg_length) {
        const Eigen::Vector3d pl = pb + u * axis;
        Eigen::Vector2d n_out;
        const double s = geom.hole_poly.signed_out_dist(pl.head<2>(), &n_out);
        if (s > 0.0) {
          detail::add_contact(acc, st, prm, pl,
                              Eigen::Vector3d(-n_out.x(), -n_out.y(), 0.0), s, k, d);
          acc.wall = true;
        }
      }
    }
  }

  if (flags) {
    flags->surface_contact = acc.surface;
    flags->wall_contact = acc.wall;
    flags->inserted_depth = std::max(0.0, -st.pos.z());
  }
  const Eigen::Matrix3d Rt = R.transpose();
  return Wrench6::from(Rt * acc.force, Rt * acc.torque);
}

struct ObserveSample {
  Wrench6 tau_ext;  // contact wrench (+ sensor noise), EE frame
  Wrench6 tau_in;   // commanded task wrench, EE frame
  Twist6 v;         // EE-frame twist
};

inline ObserveSample observe(const SimState& st, const Wrench6& cmd,
                             const SceneGeometry& geom, const SimParams& prm,
                             Rng* noise_rng = nullptr) {
  ObserveSample o;
  o.tau_ext = contact_wrench(st, geom, prm);
  if (prm.noise_enabled && noise_rng) {
    for (int i = 0; i < 3; ++i) o.tau_ext.v[i] += noise_rng->normal(0.0, prm.noise_force);
    for (int i = 3; i < 6; ++i) o.tau_ext.v[i] += noise_rng->normal(0.0, prm.noise_torque);
  }
  o.tau_in = cmd;
  o.v = st.twist_ee();
  return o;
}

// EE-frame pose error (desired - current) as position offset + rotation
// vector, both rotated into the current EE frame.
inline Vec6d pose_error_ee(const SimState& st) {
  const Eigen::Matrix3d R = st.rotation();
  const Eigen::Vector3d ep_w = st.desired.position() - st.pos;
  const Eigen::Matrix3d Rerr = st.desired.rotation() * R.transpose();
  const Eigen::AngleAxisd aa(Rerr);
  const Eigen::Vector3d er_w = aa.angle() * aa.axis();
  Vec6d e;
  e.head<3>() = R.transpose() * ep_w;
  e.tail<3>() = R.transpose() * er_w;
  return e;
}

// One 1 kHz step of M_ee * xdd = impedance_command + contact_wrench with
// semi-implicit Euler. Twist is norm-clamped after integration; sustained
// clamping marks the state aborted.
inline void sim_step(SimState& st, const Wrench6& f_ff, const Gains& gains,
                     const SceneGeometry& geom, const SimParams& prm) {
  if (!f_ff.finite()) throw std::invalid_argument("sim_step: non-finite feedforward wrench");

  const Eigen::Matrix3d R = st.rotation();
  Vec6d twist_err;
  twist_err.head<3>() = -(R.transpose() * st.vel);
  twist_err.tail<3>() = -(R.transpose() * st.omega);

  const Wrench6 cmd = saturate(impedance_command(f_ff, pose_error_ee(st), twist_err, gains));
  st.last_cmd = cmd;

  ContactFlags flags;
  const Wrench6 ext = contact_wrench(st, geom, prm, &flags);

  const Eigen::Vector3d f_w = R * (cmd.force() + ext.force());
  const Eigen::Vector3d t_w = R * (cmd.torque() + ext.torque());

  for (int i = 0; i < 3; ++i) {
    st.vel[i] += prm.dt * f_w[i] / prm.inertia[i];
    st.omega[i] += prm.dt * t_w[i] / prm.inertia[3 + i];
  }

  bool over = false;
  const double vn = st.vel.norm();
  if (vn > kMaxLinVel) {
    st.vel *= kMaxLinVel / vn;
    over = true;
  }
  const double wn = st.omega.norm();
  if (wn > kMaxAngVel) {
    st.omega *= kMaxAngVel / wn;
    over = true;
  }
  st.blowup_count = over ? st.blowup_count + 1 : 0;
  if (st.blowup_count > prm.blowup_limit) st.aborted = true;

  st.pos += prm.dt * st.vel;
  const double wdt = st.omega.norm() * prm.dt;
  if (wdt > 1e-14) {
    st.rot = Eigen::Quaterniond(Eigen::AngleAxisd(wdt, st.omega.normalized())) * st.rot;
    st.rot.normalize();
  }
  st.t += prm.dt;
  st.contact = flags;
  st.contact.inserted_depth = std::max(0.0, -st.pos.z());
}

}  // namespace pegdiff
