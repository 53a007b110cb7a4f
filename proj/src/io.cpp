#include "handsyn/io.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace handsyn {

using nlohmann::json;

static const char* kToolVersion = "handsyn 1.0.0";

nlohmann::json make_manifest(const std::string& command, const json& inputs,
                             std::uint64_t seed) {
  std::time_t now;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  else
    now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return json{{"command", command},
              {"inputs", inputs},
              {"seed", seed},
              {"tool_version", kToolVersion},
              {"timestamp", buf}};
}

json topology_to_json(const TreeTopology& t) {
  return json{{"notation", format_notation(t)},
              {"parents", t.parents},
              {"joints", t.joints}};
}

TreeTopology topology_from_json(const json& j) {
  if (j.is_string()) return parse_notation(j.get<std::string>());
  TreeTopology t;
  t.parents = j.at("parents").get<std::vector<int>>();
  t.joints = j.at("joints").get<std::vector<int>>();
  validate(t);
  return t;
}

json atlas_to_json(const Atlas& atlas) {
  json rows = json::array();
  for (const AtlasRow& r : atlas.rows)
    rows.push_back({{"e", r.e},
                    {"joint_arrays", r.jointArrayCount},
                    {"parent_arrays", r.parentArrayCount},
                    {"candidates", r.candidateCount}});
  json candidates = json::array();
  for (const TreeTopology& t : atlas.candidates) {
    json c = topology_to_json(t);
    c["m"] = atlas.query.m;
    c["b"] = atlas.query.b;
    c["e"] = t.live_edge_count();
    c["J"] = t.total_joints();
    candidates.push_back(std::move(c));
  }
  return json{{"query",
               {{"m", atlas.query.m},
                {"b", atlas.query.b},
                {"e_lo", atlas.query.eLo},
                {"e_hi", atlas.query.eHi}}},
              {"J", atlas.totalJoints.str()},
              {"feasible", atlas.feasible},
              {"diagnostic", atlas.diagnostic},
              {"joint_array_count", atlas.jointArrayCount},
              {"parent_array_count", atlas.parentArrayCount},
              {"candidate_count", atlas.candidates.size()},
              {"rows", rows},
              {"candidates", candidates}};
}

std::string atlas_table(const Atlas& atlas) {
  std::ostringstream os;
  os << "m=" << atlas.query.m << " b=" << atlas.query.b << " J=" << atlas.totalJoints.str()
     << "\n";
  if (!atlas.feasible) {
    os << atlas.diagnostic << "\n";
    return os.str();
  }
  os << std::left << std::setw(6) << "e" << std::setw(10) << "Joints" << std::setw(8) << "j"
     << std::setw(8) << "p" << "Candidate Topologies\n";
  for (const AtlasRow& r : atlas.rows)
    os << std::left << std::setw(6) << r.e << std::setw(10) << atlas.totalJoints.str()
       << std::setw(8) << r.jointArrayCount << std::setw(8) << r.parentArrayCount
       << r.candidateCount << "\n";
  os << "total candidates: " << atlas.candidates.size() << "\n";
  for (const TreeTopology& t : atlas.candidates) os << "  " << format_notation(t) << "\n";
  return os.str();
}

json report_to_json(const TreeTopology& t, const SolvabilityReport& report) {
  json violations = json::array();
  for (const Violation& v : report.violations)
    violations.push_back({{"subgraph", v.notation},
                          {"root", v.root},
                          {"branches", v.branches},
                          {"m", v.m.str()}});
  return json{{"topology", topology_to_json(t)},
              {"solvable", report.solvable},
              {"M", report.M.str()},
              {"unconstrained", report.unconstrained},
              {"violations", violations}};
}

namespace {

json quat_to_json(const Quat& q) { return json::array({q.w, q.x, q.y, q.z}); }

Quat quat_from_json(const json& j) { return Quat(j[0], j[1], j[2], j[3]); }

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& j) {
  return Eigen::Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

// Displacements travel as unit quaternion + translation.
json pose_to_json(const DualQuaternion& d) {
  return json{{"q", quat_to_json(d.real)}, {"t", vec3_to_json(translation(d))}};
}

DualQuaternion pose_from_json(const json& j) {
  DualQuaternion d;
  d.real = quat_from_json(j.at("q"));
  double n = d.real.norm();
  d.real = d.real * (1.0 / n);
  Eigen::Vector3d t = vec3_from_json(j.at("t"));
  d.dual = Quat(0, t) * d.real * 0.5;
  return d;
}

json twistspec_to_json(const TwistSpec& s) {
  return json{{"branch", s.branch + 1},
              {"position", s.position + 1},
              {"angular", vec3_to_json(s.value.angular)},
              {"linear", vec3_to_json(s.value.linear)}};
}

TwistSpec twistspec_from_json(const json& j) {
  TwistSpec s;
  s.branch = j.at("branch").get<int>() - 1;
  s.position = j.at("position").get<int>() - 1;
  s.value.angular = vec3_from_json(j.at("angular"));
  s.value.linear = vec3_from_json(j.at("linear"));
  return s;
}

}  // namespace

json task_to_json(const Task& task) {
  json branches = json::array();
  for (const auto& poses : task.positions) {
    json list = json::array();
    for (const DualQuaternion& p : poses) list.push_back(pose_to_json(p));
    branches.push_back({{"positions", list}});
  }
  json twists = json::array(), accels = json::array();
  for (const TwistSpec& s : task.twists) twists.push_back(twistspec_to_json(s));
  for (const TwistSpec& s : task.accels) accels.push_back(twistspec_to_json(s));
  return json{{"mp", task.mp}, {"branches", branches}, {"twists", twists}, {"accels", accels}};
}

Task task_from_json(const json& j) {
  Task task;
  task.mp = j.at("mp").get<int>();
  for (const json& b : j.at("branches")) {
    std::vector<DualQuaternion> poses;
    for (const json& p : b.at("positions")) poses.push_back(pose_from_json(p));
    task.positions.push_back(std::move(poses));
  }
  if (j.contains("twists"))
    for (const json& s : j["twists"]) task.twists.push_back(twistspec_from_json(s));
  if (j.contains("accels"))
    for (const json& s : j["accels"]) task.accels.push_back(twistspec_from_json(s));
  return task;
}

json configuration_to_json(const HandConfiguration& cfg) {
  json axes = json::array();
  for (const PluckerLine& l : cfg.axes)
    axes.push_back(json::array({l.direction.x(), l.direction.y(), l.direction.z(),
                                l.moment.x(), l.moment.y(), l.moment.z()}));
  json angles = json::array();
  for (int k = 0; k < cfg.jointAngles.cols(); ++k) {
    json col = json::array();
    for (int jj = 0; jj < cfg.jointAngles.rows(); ++jj) col.push_back(cfg.jointAngles(jj, k));
    angles.push_back(std::move(col));
  }
  json out{{"axes", axes}, {"joint_angles", angles}};
  if (!cfg.rates.empty()) {
    json rates = json::object();
    for (const auto& [pos, r] : cfg.rates) {
      json v = json::array();
      for (int i = 0; i < r.size(); ++i) v.push_back(r[i]);
      rates[std::to_string(pos + 1)] = std::move(v);
    }
    out["rates"] = std::move(rates);
  }
  if (!cfg.accels.empty()) {
    json accels = json::object();
    for (const auto& [pos, a] : cfg.accels) {
      json v = json::array();
      for (int i = 0; i < a.size(); ++i) v.push_back(a[i]);
      accels[std::to_string(pos + 1)] = std::move(v);
    }
    out["accels"] = std::move(accels);
  }
  return out;
}

json result_to_json(const SynthesisResult& result, const TreeTopology& t) {
  json out = configuration_to_json(result.configuration);
  out["topology"] = format_notation(t);
  out["final_error"] = result.finalError;
  out["iterations"] = result.iterations;
  out["wall_time_seconds"] = result.wallTime;
  out["converged"] = result.converged;
  out["seed"] = result.seed;
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << contents;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_json(const std::string& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

json read_json(const std::string& path) { return json::parse(read_file(path)); }

}  // namespace handsyn
