#ifndef HANDSYN_SCREWS_HPP
#define HANDSYN_SCREWS_HPP

#include <Eigen/Dense>

namespace handsyn {

// Quaternion (w, x, y, z).
struct Quat {
  double w = 1, x = 0, y = 0, z = 0;

  Quat() = default;
  Quat(double w, double x, double y, double z) : w(w), x(x), y(y), z(z) {}
  Quat(double w, const Eigen::Vector3d& v) : w(w), x(v.x()), y(v.y()), z(v.z()) {}

  Eigen::Vector3d vec() const { return {x, y, z}; }
  Quat conjugate() const { return {w, -x, -y, -z}; }
  double dot(const Quat& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }

  Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }
  Quat operator+(const Quat& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  Quat operator-(const Quat& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
  Quat operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
};

// Unit dual quaternion representing a spatial displacement.
struct DualQuaternion {
  Quat real;
  Quat dual{0, 0, 0, 0};

  static DualQuaternion identity() { return {}; }
};

// Line in Plücker coordinates: unit direction plus moment, direction.moment = 0.
struct PluckerLine {
  Eigen::Vector3d direction{0, 0, 1};
  Eigen::Vector3d moment{0, 0, 0};

  // Line through `point` along `dir` (normalized here).
  static PluckerLine through(const Eigen::Vector3d& point, const Eigen::Vector3d& dir) {
    PluckerLine l;
    l.direction = dir.normalized();
    l.moment = point.cross(l.direction);
    return l;
  }
};

// 6-vector of angular and linear velocity; accelerations share the shape.
struct Twist {
  Eigen::Vector3d angular{0, 0, 0};
  Eigen::Vector3d linear{0, 0, 0};

  Twist operator+(const Twist& o) const { return {angular + o.angular, linear + o.linear}; }
  Twist operator-(const Twist& o) const { return {angular - o.angular, linear - o.linear}; }
  Twist operator*(double s) const { return {angular * s, linear * s}; }
  double norm() const { return std::sqrt(angular.squaredNorm() + linear.squaredNorm()); }
};

// exp(theta/2 S): unit dual quaternion of the rotation by theta about S.
DualQuaternion axis_exponential(const PluckerLine& S, double theta);

// Composition: a applied after b.
DualQuaternion dq_multiply(const DualQuaternion& a, const DualQuaternion& b);

// Inverse of a unit dual quaternion.
DualQuaternion dq_conjugate(const DualQuaternion& a);

// P1k such that P1k * P1 = Pk.
DualQuaternion relative_displacement(const DualQuaternion& Pk, const DualQuaternion& P1);

// The line S displaced by D.
PluckerLine transform_axis(const PluckerLine& S, const DualQuaternion& D);

// Motor Lie bracket of two weighted screws.
Twist screw_bracket(const Twist& a, const Twist& b);

Eigen::Matrix3d rotation_matrix(const Quat& q);
Eigen::Vector3d translation(const DualQuaternion& d);
Eigen::Vector3d transform_point(const DualQuaternion& d, const Eigen::Vector3d& p);

// Renormalizes the unit and orthogonality conditions after long products.
DualQuaternion dq_normalized(const DualQuaternion& d);

// Displacement distance treating q and -q as equal (double cover).
double dq_distance(const DualQuaternion& a, const DualQuaternion& b);

}  // namespace handsyn

#endif
