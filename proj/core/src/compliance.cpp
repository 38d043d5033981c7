#include "deltakit/compliance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "deltakit/kinematics.hpp"
#include "deltakit/units.hpp"

namespace deltakit {

namespace {

Eigen::PartialPivLU<Matrix6d> checked_lu(const Matrix6d& m, double condition_limit,
                                         const char* what) {
  Eigen::PartialPivLU<Matrix6d> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / condition_limit)) {
    const double cond = rcond > 0.0 ? 1.0 / rcond
                                    : std::numeric_limits<double>::infinity();
    throw SingularityError(std::string(what) +
                               " is ill-conditioned (condition estimate " +
                               std::to_string(cond) + ")",
                           cond);
  }
  return lu;
}

}  // namespace

LinkGeometry link_endpoints(const DeltaParams& params, const PlatformPose& pose) {
  const JointPositions q = inverse_kinematics(params, pose);
  LinkGeometry geom;
  geom.link_length = params.link_length;
  for (int leg = 0; leg < 3; ++leg) {
    const Vec3 u = params.rail_radial(leg);
    const Vec3 tangent = Vec3::UnitZ().cross(u);
    const Vec3 slider_mid =
        params.base_radius * u + q[static_cast<std::size_t>(leg)] * Vec3::UnitZ();
    const Vec3 platform_mid = pose + params.platform_radius * u;
    for (int side = 0; side < 2; ++side) {
      const double offset = (side == 0 ? 0.5 : -0.5) * params.leg_width;
      const std::size_t k = static_cast<std::size_t>(2 * leg + side);
      geom.slider_joint[k] = slider_mid + offset * tangent;
      geom.platform_joint[k] = platform_mid + offset * tangent;
    }
  }
  return geom;
}

Matrix6d link_wrench_matrix(const LinkGeometry& geom, const PlatformPose& pose) {
  Matrix6d m;
  for (int k = 0; k < 6; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    const Vec3 axis = geom.platform_joint[i] - geom.slider_joint[i];
    const Vec3 arm = geom.platform_joint[i] - pose;
    m.block<3, 1>(0, k) = axis;
    m.block<3, 1>(3, k) = arm.cross(axis);
  }
  return m;
}

Vector6d solve_link_forces(const LinkGeometry& geom, const PlatformPose& pose,
                           const Wrench& wrench, double condition_limit) {
  const Matrix6d m = link_wrench_matrix(geom, pose);
  const auto lu = checked_lu(m, condition_limit, "link-wrench system");
  Vector6d rhs;
  rhs << wrench.force, wrench.torque;
  return geom.link_length * lu.solve(rhs);
}

ComplianceLaw ComplianceLaw::power(double a, double b) {
  if (!(std::isfinite(a) && a > 0.0)) {
    throw DomainError("power-law coefficient a must be positive");
  }
  if (!(std::isfinite(b) && b > 0.0 && b <= 1.5)) {
    throw DomainError("power-law exponent b must lie in (0, 1.5]");
  }
  ComplianceLaw law;
  law.kind = Kind::power;
  law.a = a;
  law.b = b;
  law.c = 0.0;
  return law;
}

ComplianceLaw ComplianceLaw::linear(double c) {
  if (!(std::isfinite(c) && c > 0.0)) {
    throw DomainError("linear compliance c must be positive");
  }
  ComplianceLaw law;
  law.kind = Kind::linear;
  law.c = c;
  law.a = 0.0;
  law.b = 1.0;
  return law;
}

double ComplianceLaw::deflection_um(double force_N) const {
  if (kind == Kind::linear) return c * force_N;
  // Identified on tension magnitudes; extended odd-symmetrically so both
  // torque signs stay defined.
  const double mag = a * std::pow(std::abs(force_N), b);
  return std::copysign(mag, force_N);
}

Vector6d link_deflections(const Vector6d& forces_N, const ComplianceLaw& law) {
  Vector6d out;
  for (int i = 0; i < 6; ++i) out[i] = law.deflection_um(forces_N[i]);
  return out;
}

DeflectionResult platform_deflection(const LinkGeometry& geom,
                                     const PlatformPose& pose,
                                     const Vector6d& deflections_um,
                                     double condition_limit) {
  const Matrix6d m = link_wrench_matrix(geom, pose);
  const Matrix6d mt = m.transpose();
  const auto lu = checked_lu(mt, condition_limit, "link-deflection system");
  const Vector6d rhs = deflections_um * units::um_to_mm(1.0);
  const Vector6d motion = geom.link_length * lu.solve(rhs);  // mm, rad

  DeflectionResult result;
  result.linear_um = motion.head<3>() * units::mm_to_um(1.0);
  result.angular_deg = motion.tail<3>().unaryExpr(
      [](double r) { return units::rad_to_deg(r); });
  result.link_deflections_um = deflections_um;
  return result;
}

DeflectionResult solve_deflection(const DeltaParams& params,
                                  const PlatformPose& pose,
                                  const ComplianceLaw& law, const Wrench& wrench,
                                  double condition_limit) {
  const LinkGeometry geom = link_endpoints(params, pose);
  const Vector6d forces = solve_link_forces(geom, pose, wrench, condition_limit);
  const Vector6d deflections = link_deflections(forces, law);
  DeflectionResult result =
      platform_deflection(geom, pose, deflections, condition_limit);
  result.link_forces_N = forces;
  return result;
}

double torsional_compliance(const DeltaParams& params, const PlatformPose& pose,
                            const ComplianceLaw& law, double tau_z_ref_Nm,
                            double condition_limit) {
  if (!(std::isfinite(tau_z_ref_Nm)) || tau_z_ref_Nm == 0.0) {
    throw DomainError("reference torque must be non-zero");
  }
  Wrench wrench;
  wrench.torque = Vec3(0.0, 0.0, units::newton_m_to_newton_mm(tau_z_ref_Nm));
  const DeflectionResult d = solve_deflection(params, pose, law, wrench,
                                              condition_limit);
  return d.angular_deg.z() / tau_z_ref_Nm;
}

std::vector<ForceDeflectionPair> reduce_torsion_experiment(
    const TorsionExperiment& experiment, const DeltaParams& params,
    const PlatformPose& pose, double condition_limit) {
  const LinkGeometry geom = link_endpoints(params, pose);
  const Matrix6d m = link_wrench_matrix(geom, pose);
  const auto lu = checked_lu(m, condition_limit, "link-wrench system");
  const double L = geom.link_length;

  std::vector<ForceDeflectionPair> pairs;
  pairs.reserve(experiment.samples.size() * 6);
  for (const TorsionSample& s : experiment.samples) {
    Vector6d wrench = Vector6d::Zero();
    wrench[5] = s.tau_z_Nmm;
    const Vector6d forces = L * lu.solve(wrench);

    Vector6d twist = Vector6d::Zero();
    twist[5] = units::deg_to_rad(s.dtheta_z_deg);
    const Vector6d deflections_mm = (m.transpose() * twist) / L;

    for (int k = 0; k < 6; ++k) {
      pairs.push_back({forces[k], units::mm_to_um(deflections_mm[k])});
    }
  }
  return pairs;
}

FitReport fit_compliance_law(std::span<const ForceDeflectionPair> pairs) {
  // Pool magnitudes; the law is identified on |F| and extended odd-symmetrically.
  std::vector<double> f, y;
  f.reserve(pairs.size());
  y.reserve(pairs.size());
  for (const ForceDeflectionPair& p : pairs) {
    const double fm = std::abs(p.force_N);
    if (fm > 0.0 && std::isfinite(fm) && std::isfinite(p.deflection_um)) {
      f.push_back(fm);
      y.push_back(std::abs(p.deflection_um));
    }
  }
  if (f.size() < 10) {
    throw FitError("need at least 10 pairs with non-zero force, got " +
                   std::to_string(f.size()));
  }
  const auto [fmin, fmax] = std::minmax_element(f.begin(), f.end());
  if (*fmax - *fmin < 1e-12 * std::max(1.0, *fmax)) {
    throw FitError("degenerate data: all forces are equal");
  }

  // Log-log linear seed over the strictly positive observations.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n_log = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (y[i] <= 0.0) continue;
    const double lx = std::log(f[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n_log;
  }
  if (n_log < 2) throw FitError("not enough positive deflections to seed the fit");
  const double denom = static_cast<double>(n_log) * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw FitError("degenerate force support in log space");
  double b = (static_cast<double>(n_log) * sxy - sx * sy) / denom;
  double a = std::exp((sy - b * sx) / static_cast<double>(n_log));

  // Damped Gauss-Newton on the original scale, residuals r = a f^b − y.
  auto sum_sq = [&](double aa, double bb) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = aa * std::pow(f[i], bb) - y[i];
      s += r * r;
    }
    return s;
  };
  double cost = sum_sq(a, b);
  double lambda = 1e-3;
  int iterations = 0;
  bool converged = false;
  while (iterations < 200 && !converged) {
    ++iterations;
    double jaa = 0, jab = 0, jbb = 0, ga = 0, gb = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double fb = std::pow(f[i], b);
      const double model = a * fb;
      const double r = model - y[i];
      const double da = fb;
      const double db = model * std::log(f[i]);
      jaa += da * da;
      jab += da * db;
      jbb += db * db;
      ga += da * r;
      gb += db * r;
    }
    bool stepped = false;
    for (int tries = 0; tries < 25 && !stepped; ++tries) {
      const double d11 = jaa * (1.0 + lambda);
      const double d22 = jbb * (1.0 + lambda);
      const double det = d11 * d22 - jab * jab;
      if (std::abs(det) < 1e-300) break;
      const double step_a = (-ga * d22 + gb * jab) / det;
      const double step_b = (-d11 * gb + jab * ga) / det;
      const double na = a + step_a;
      const double nb = b + step_b;
      if (na > 0.0 && std::isfinite(na) && std::isfinite(nb)) {
        const double ncost = sum_sq(na, nb);
        if (ncost <= cost) {
          const double rel = (cost - ncost) / std::max(cost, 1e-300);
          converged = rel < 1e-14 ||
                      (std::abs(step_a) < 1e-12 * std::max(1.0, std::abs(a)) &&
                       std::abs(step_b) < 1e-12 * std::max(1.0, std::abs(b)));
          a = na;
          b = nb;
          cost = ncost;
          lambda = std::max(lambda * 0.5, 1e-12);
          stepped = true;
        }
      }
      if (!stepped) lambda *= 4.0;
    }
    if (!stepped) break;  // no productive step at any damping
  }

  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= static_cast<double>(y.size());
  double ss_tot = 0.0;
  for (double v : y) ss_tot += (v - mean_y) * (v - mean_y);
  const double ss_res = sum_sq(a, b);

  FitReport report;
  try {
    report.law = ComplianceLaw::power(a, b);
  } catch (const DomainError& e) {
    throw FitError(std::string("identified law outside its validity range: ") +
                   e.what());
  }
  report.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  report.rms_error_um = std::sqrt(ss_res / static_cast<double>(f.size()));
  report.n_points = f.size();
  report.iterations = iterations;
  return report;
}

}  // namespace deltakit
