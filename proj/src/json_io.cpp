#include "locconvex/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace locconvex {

namespace {

Json vec_to_json(const VecX& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json quat_to_json(const UnitQuat& z) {
  return Json::array({z.a(), z.b(), z.c(), z.d()});
}

UnitQuat quat_from_json(const Json& doc) {
  if (!doc.is_array() || doc.size() != 4) throw InvalidInput("spin must be a 4-vector");
  return UnitQuat::normalized(Quat{doc[0].get<double>(), doc[1].get<double>(),
                                   doc[2].get<double>(), doc[3].get<double>()});
}

struct SampleTable {
  std::vector<double> t;
  std::vector<FrenetSample> frames;
  std::vector<UnitQuat> spins3;
  std::vector<SpinPair> spins4;
};

SampleTable sample_curve(const AnalyticCurve& curve, int steps) {
  if (steps < 2) throw InvalidInput("steps must be at least 2");
  SampleTable table;
  table.t.resize(steps + 1);
  table.frames.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    table.t[i] = static_cast<double>(i) / steps;
    table.frames[i] = frenet(curve, table.t[i]);
  }
  if (curve.dim == 3)
    table.spins3 = lifted_frenet_path3(curve, steps);
  else
    table.spins4 = lifted_frenet_path4(curve, steps);
  return table;
}

Json residuals_of(const AnalyticCurve& curve, const SampleTable& table) {
  double sphere = 0.0, ortho = 0.0;
  for (std::size_t i = 0; i < table.frames.size(); ++i) {
    sphere = std::max(sphere,
                      std::abs(table.frames[i].frame.col(0).norm() - 1.0));
    const MatX gram = table.frames[i].frame.transpose() * table.frames[i].frame;
    ortho = std::max(ortho, (gram - MatX::Identity(curve.dim, curve.dim))
                                .cwiseAbs()
                                .maxCoeff());
  }
  const double closure = (curve.point(0.0) - curve.point(1.0)).norm();
  return Json{{"sphere_norm", sphere}, {"frame_orthogonality", ortho}, {"closure", closure}};
}

}  // namespace

Json curve_to_json(const AnalyticCurve& curve, int steps) {
  const SampleTable table = sample_curve(curve, steps);

  Json samples = Json::array();
  for (int i = 0; i <= steps; ++i) {
    const FrenetSample& f = table.frames[i];
    Json row{{"t", table.t[i]},
             {"gamma", vec_to_json(f.frame.col(0))},
             {"speed", f.speed},
             {"kappa", f.kappa}};
    if (curve.dim == 4) row["tau"] = f.tau;
    Json frame = Json::array();
    for (int r = 0; r < curve.dim; ++r) frame.push_back(vec_to_json(f.frame.row(r).transpose()));
    row["frame"] = frame;
    if (curve.dim == 3)
      row["spin"] = quat_to_json(table.spins3[i]);
    else
      row["spin"] = Json{{"left", quat_to_json(table.spins4[i].left)},
                         {"right", quat_to_json(table.spins4[i].right)}};
    samples.push_back(std::move(row));
  }

  return Json{{"kind", "curve"},
              {"label", curve.label},
              {"dim", curve.dim},
              {"steps", steps},
              {"samples", std::move(samples)},
              {"residuals", residuals_of(curve, table)}};
}

AnalyticCurve curve_from_json(const Json& doc, int solve_steps) {
  if (!doc.is_object() || !doc.contains("samples"))
    throw InvalidInput("curve document must carry samples");
  const int dim = doc.value("dim", 3);
  if (dim != 3 && dim != 4) throw InvalidInput("ambient dimension must be 3 or 4");

  const Json& samples = doc["samples"];
  if (!samples.is_array() || samples.size() < 2)
    throw InvalidInput("curve document needs at least two samples");

  std::vector<double> t, c1, c2, c3;
  for (const Json& row : samples) {
    t.push_back(row.at("t").get<double>());
    const double speed = row.at("speed").get<double>();
    const double kappa = row.at("kappa").get<double>();
    c1.push_back(speed);
    c2.push_back(speed * kappa);
    if (dim == 4) c3.push_back(speed * row.at("tau").get<double>());
  }

  CoefficientPath coeffs;
  coeffs.dim = dim;
  coeffs.quasi = true;
  coeffs.c[0] = piecewise_linear(t, c1);
  coeffs.c[1] = piecewise_linear(t, c2);
  if (dim == 4) coeffs.c[2] = piecewise_linear(t, c3);

  AnalyticCurve curve = solve_unique_curve(coeffs, solve_steps);
  curve.label = doc.value("label", std::string{});
  return curve;
}

Json pair_to_json(const CurvePair& pair, int steps) {
  double speed_gap = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    speed_gap = std::max(speed_gap,
                         std::abs(frenet(pair.left, t).speed - frenet(pair.right, t).speed));
  }
  return Json{{"kind", "pair"},
              {"left", curve_to_json(pair.left, steps)},
              {"right", curve_to_json(pair.right, steps)},
              {"z_left", quat_to_json(pair.z_left)},
              {"z_right", quat_to_json(pair.z_right)},
              {"locally_convex", pair.locally_convex},
              {"residuals", Json{{"speed_gap", speed_gap}}}};
}

CurvePair pair_from_json(const Json& doc, int solve_steps) {
  if (!doc.is_object() || !doc.contains("left") || !doc.contains("right"))
    throw InvalidInput("pair document must carry left and right curves");
  CurvePair pair;
  pair.left = curve_from_json(doc["left"], solve_steps);
  pair.right = curve_from_json(doc["right"], solve_steps);
  pair.z_left = quat_from_json(doc.at("z_left"));
  pair.z_right = quat_from_json(doc.at("z_right"));
  pair.locally_convex = doc.value("locally_convex", false);
  return pair;
}

Json certificate_to_json(const NonconvexityCertificate& cert) {
  Json roots = Json::array();
  for (const IntersectionRoot& root : cert.report.roots)
    roots.push_back(Json{{"t", root.t}, {"multiplicity", root.multiplicity}});
  return Json{{"kind", "certificate"},
              {"normal", vec_to_json(cert.plane.normal)},
              {"roots", std::move(roots)},
              {"total", cert.report.total},
              {"verdict", "nonconvex"}};
}

Json matrix_to_json(const MatX& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r).transpose()));
  return Json{{"kind", "matrix"}, {"matrix", std::move(rows)}};
}

MatX matrix_from_json(const Json& doc) {
  const Json& rows = doc.is_array() ? doc : doc.at("matrix");
  if (!rows.is_array() || rows.empty() || !rows[0].is_array())
    throw InvalidInput("matrix must be an array of rows");
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(rows[0].size());
  MatX m(nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc) throw InvalidInput("matrix rows differ in length");
    for (int c = 0; c < nc; ++c) m(r, c) = rows[r][c].get<double>();
  }
  return m;
}

Json spin_to_json(const SpinPair& z) {
  return Json{{"kind", "spin"},
              {"left", quat_to_json(z.left)},
              {"right", quat_to_json(z.right)}};
}

SpinPair spin_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("left") || !doc.contains("right"))
    throw InvalidInput("spin document must carry left and right quaternions");
  return SpinPair{quat_from_json(doc["left"]), quat_from_json(doc["right"])};
}

CoefficientPath coefficients_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("c"))
    throw InvalidInput("coefficient document must carry c");
  CoefficientPath coeffs;
  coeffs.dim = doc.value("dim", 3);
  if (coeffs.dim != 3 && coeffs.dim != 4) throw InvalidInput("ambient dimension must be 3 or 4");
  coeffs.quasi = doc.value("quasi", false);

  const Json& c = doc["c"];
  if (!c.is_array() || static_cast<int>(c.size()) != coeffs.dim - 1)
    throw InvalidInput("expected dim - 1 coefficient entries");

  for (int i = 0; i < coeffs.dim - 1; ++i) {
    if (c[i].is_number()) {
      coeffs.c[i] = constant_path(c[i].get<double>());
    } else if (c[i].is_array()) {
      if (!doc.contains("grid")) throw InvalidInput("sampled coefficients need a grid");
      std::vector<double> grid = doc["grid"].get<std::vector<double>>();
      std::vector<double> values = c[i].get<std::vector<double>>();
      coeffs.c[i] = piecewise_linear(std::move(grid), std::move(values));
    } else {
      throw InvalidInput("coefficient entries must be numbers or arrays");
    }
  }
  return coeffs;
}

std::string curve_to_csv(const AnalyticCurve& curve, int steps) {
  const SampleTable table = sample_curve(curve, steps);
  std::ostringstream out;
  out.precision(17);

  out << "t";
  for (int j = 1; j <= curve.dim; ++j) out << ",x" << j;
  out << ",speed,kappa";
  if (curve.dim == 4) out << ",tau";
  for (int r = 1; r <= curve.dim; ++r)
    for (int c = 1; c <= curve.dim; ++c) out << ",f" << r << c;
  if (curve.dim == 3)
    out << ",spin_a,spin_b,spin_c,spin_d";
  else
    out << ",zl_a,zl_b,zl_c,zl_d,zr_a,zr_b,zr_c,zr_d";
  out << "\n";

  for (int i = 0; i <= steps; ++i) {
    const FrenetSample& f = table.frames[i];
    out << table.t[i];
    for (int r = 0; r < curve.dim; ++r) out << "," << f.frame(r, 0);
    out << "," << f.speed << "," << f.kappa;
    if (curve.dim == 4) out << "," << f.tau;
    for (int r = 0; r < curve.dim; ++r)
      for (int c = 0; c < curve.dim; ++c) out << "," << f.frame(r, c);
    if (curve.dim == 3) {
      const UnitQuat& z = table.spins3[i];
      out << "," << z.a() << "," << z.b() << "," << z.c() << "," << z.d();
    } else {
      const SpinPair& z = table.spins4[i];
      out << "," << z.left.a() << "," << z.left.b() << "," << z.left.c() << "," << z.left.d();
      out << "," << z.right.a() << "," << z.right.b() << "," << z.right.c() << "," << z.right.d();
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace locconvex
