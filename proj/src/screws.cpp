#include "handsyn/screws.hpp"

namespace handsyn {

DualQuaternion axis_exponential(const PluckerLine& S, double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  DualQuaternion d;
  d.real = Quat(c, S.direction * s);
  d.dual = Quat(0, S.moment * s);
  return d;
}

DualQuaternion dq_multiply(const DualQuaternion& a, const DualQuaternion& b) {
  DualQuaternion d;
  d.real = a.real * b.real;
  d.dual = a.real * b.dual + a.dual * b.real;
  return d;
}

DualQuaternion dq_conjugate(const DualQuaternion& a) {
  return {a.real.conjugate(), a.dual.conjugate()};
}

DualQuaternion relative_displacement(const DualQuaternion& Pk, const DualQuaternion& P1) {
  return dq_multiply(Pk, dq_conjugate(P1));
}

Eigen::Matrix3d rotation_matrix(const Quat& q) {
  Eigen::Matrix3d R;
  double w = q.w, x = q.x, y = q.y, z = q.z;
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

Eigen::Vector3d translation(const DualQuaternion& d) {
  return (d.dual * d.real.conjugate()).vec() * 2.0;
}

Eigen::Vector3d transform_point(const DualQuaternion& d, const Eigen::Vector3d& p) {
  return rotation_matrix(d.real) * p + translation(d);
}

PluckerLine transform_axis(const PluckerLine& S, const DualQuaternion& D) {
  Eigen::Matrix3d R = rotation_matrix(D.real);
  Eigen::Vector3d t = translation(D);
  PluckerLine out;
  out.direction = R * S.direction;
  out.moment = R * S.moment + t.cross(out.direction);
  return out;
}

Twist screw_bracket(const Twist& a, const Twist& b) {
  return {a.angular.cross(b.angular),
          a.angular.cross(b.linear) + a.linear.cross(b.angular)};
}

DualQuaternion dq_normalized(const DualQuaternion& d) {
  double n = d.real.norm();
  DualQuaternion out;
  out.real = d.real * (1.0 / n);
  Quat dual = d.dual * (1.0 / n);
  out.dual = dual - out.real * out.real.dot(dual);
  return out;
}

double dq_distance(const DualQuaternion& a, const DualQuaternion& b) {
  auto norm8 = [](const DualQuaternion& d) {
    return std::sqrt(d.real.dot(d.real) + d.dual.dot(d.dual));
  };
  DualQuaternion diff{a.real - b.real, a.dual - b.dual};
  DualQuaternion sum{a.real + b.real, a.dual + b.dual};
  return std::min(norm8(diff), norm8(sum));
}

}  // namespace handsyn
