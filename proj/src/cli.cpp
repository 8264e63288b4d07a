#include "locconvex/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locconvex/bruhat.hpp"
#include "locconvex/convexity.hpp"
#include "locconvex/covering.hpp"
#include "locconvex/curves.hpp"
#include "locconvex/decompose.hpp"
#include "locconvex/errors.hpp"
#include "locconvex/integrate.hpp"
#include "locconvex/json_io.hpp"
#include "locconvex/transforms.hpp"

namespace locconvex {

namespace {

Json read_json_input(const std::string& path) {
  if (path.empty() || path == "-") return Json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open input file: " + path);
  return Json::parse(in);
}

void write_output(const std::string& path, const std::string& text) {
  std::string payload = text;
  if (payload.empty() || payload.back() != '\n') payload.push_back('\n');
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open output file: " + path);
  out << payload;
}

struct CommonOpts {
  int steps = 1024;
  std::string format = "json";
  std::string output = "-";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--steps", opts.steps, "sample count per unit interval")
      ->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("-o,--output", opts.output, "output path, '-' for stdout");
}

int solve_density(const CommonOpts& opts) { return std::max(4096, 4 * opts.steps); }

void emit_curve(const AnalyticCurve& curve, const CommonOpts& opts) {
  if (opts.format == "csv") {
    write_output(opts.output, curve_to_csv(curve, opts.steps));
  } else {
    write_output(opts.output, curve_to_json(curve, opts.steps).dump(1));
  }
}

void require_json(const CommonOpts& opts) {
  if (opts.format != "json")
    throw InvalidInput("csv output is only available for curve results");
}

struct ExampleOpts : CommonOpts {
  std::string name;
  int m = 1;
  double c = kPi;
};

AnalyticCurve make_example(const ExampleOpts& opts) {
  AnalyticCurve base;
  if (opts.name == "sigma") {
    base = circle_sigma(opts.c);
  } else if (opts.name == "meridian") {
    base = circle_sigma(2.0 * kPi);
    base.label = "meridian";
  } else if (opts.name == "gamma1") {
    return gamma1(opts.m);
  } else if (opts.name == "gamma2") {
    return gamma2(opts.m);
  } else if (opts.name == "gamma3") {
    return gamma3(opts.m);
  } else if (opts.name == "gamma4") {
    return gamma4(opts.m);
  } else {
    throw InvalidInput("unknown example: " + opts.name);
  }
  return opts.m == 1 ? base : iterate(base, static_cast<double>(opts.m));
}

int run_example(const ExampleOpts& opts) {
  emit_curve(make_example(opts), opts);
  return 0;
}

struct InputOpts : CommonOpts {
  std::string input = "-";
};

int run_integrate(const InputOpts& opts) {
  CoefficientPath coeffs = coefficients_from_json(read_json_input(opts.input));
  emit_curve(solve_unique_curve(coeffs, solve_density(opts)), opts);
  return 0;
}

int run_decompose(const InputOpts& opts) {
  require_json(opts);
  AnalyticCurve curve = curve_from_json(read_json_input(opts.input), solve_density(opts));
  CurvePair pair = split(curve, opts.steps, solve_density(opts));
  write_output(opts.output, pair_to_json(pair, opts.steps).dump(1));
  return 0;
}

int run_fuse(const InputOpts& opts) {
  CurvePair pair = pair_from_json(read_json_input(opts.input), solve_density(opts));
  emit_curve(fuse(pair, opts.steps, solve_density(opts)), opts);
  return 0;
}

bool looks_like_matrix(const Json& doc) {
  if (doc.is_array()) return true;
  if (doc.contains("matrix")) return true;
  return doc.value("kind", "") == "matrix";
}

int run_classify(const InputOpts& opts) {
  require_json(opts);
  Json doc = read_json_input(opts.input);
  Json out;
  out["kind"] = "cell";
  if (looks_like_matrix(doc)) {
    IdentifyResult res = identify_cell(matrix_from_json(doc));
    out["notation"] = format_signed_perm(res.cell);
    out["matrix"] = matrix_to_json(res.cell.matrix())["matrix"];
  } else {
    SpinCellRep res = identify_cell_spin(spin_from_json(doc));
    out["notation"] = format_signed_perm(res.cell);
    out["rep"] = spin_to_json(res.rep);
  }
  write_output(opts.output, out.dump(1));
  return 0;
}

struct ChopOpts : InputOpts {
  bool plus = false;
};

int run_chop(const ChopOpts& opts) {
  require_json(opts);
  Json doc = read_json_input(opts.input);
  Json out;
  out["kind"] = "cell";
  out["direction"] = opts.plus ? "plus" : "minus";
  if (looks_like_matrix(doc)) {
    MatX m = matrix_from_json(doc);
    SignedPermutation cell = opts.plus ? chop_plus(m) : chop_minus(m);
    out["notation"] = format_signed_perm(cell);
    out["matrix"] = matrix_to_json(cell.matrix())["matrix"];
  } else {
    SpinPair z = spin_from_json(doc);
    SpinCellRep res = opts.plus ? chop_plus_spin(z) : chop_minus_spin(z);
    out["notation"] = format_signed_perm(res.cell);
    out["rep"] = spin_to_json(res.rep);
  }
  write_output(opts.output, out.dump(1));
  return 0;
}

struct TableOpts : CommonOpts {
  bool verify = false;
};

Json table_row_json(const ConvexTableEntry& entry) {
  Json row;
  row["dim"] = entry.dim;
  row["spin"] = spin_to_json(entry.spin);
  row["cell"] = format_signed_perm(entry.cell);
  row["future_spin"] = spin_to_json(entry.future_spin);
  row["future_cell"] = format_signed_perm(entry.future_cell);
  return row;
}

int run_convex_table(const TableOpts& opts) {
  require_json(opts);
  const std::vector<ConvexTableEntry>& table = convex_table();
  if (!opts.verify) {
    Json out;
    out["kind"] = "convex_table";
    out["rows"] = Json::array();
    for (const ConvexTableEntry& entry : table) out["rows"].push_back(table_row_json(entry));
    write_output(opts.output, out.dump(1));
    return 0;
  }
  const SignedPermutation a_transpose = signed_perm_from_matrix(arnold_matrix(3).transpose());
  std::vector<int> dim_counts(7, 0);
  int pass = 0;
  Json failures = Json::array();
  for (const ConvexTableEntry& entry : table) {
    std::vector<std::string> bad;
    ++dim_counts[static_cast<std::size_t>(entry.dim)];
    const Mat4 projected = pi4(entry.spin);
    if ((projected - entry.cell.matrix()).cwiseAbs().maxCoeff() > 1e-15) bad.push_back("projection");
    if (!(chop_minus(MatX(projected)) == a_transpose)) bad.push_back("chop_minus");
    const SpinCellRep future = chop_plus_spin(entry.spin);
    if (distance(future.rep, entry.future_spin) != 0.0) bad.push_back("future_spin");
    if (!(future.cell == entry.future_cell)) bad.push_back("future_cell");
    if (bad.empty()) {
      ++pass;
    } else {
      Json item = table_row_json(entry);
      item["failed"] = bad;
      failures.push_back(item);
    }
  }
  const std::vector<int> expected_counts{1, 3, 5, 6, 5, 3, 1};
  bool dims_ok = dim_counts.size() == expected_counts.size() &&
                 std::equal(dim_counts.begin(), dim_counts.end(), expected_counts.begin());
  std::ostringstream report;
  report << pass << "/" << table.size() << " rows pass";
  if (!dims_ok) report << " (dimension counts off)";
  if (pass == static_cast<int>(table.size()) && dims_ok) {
    write_output(opts.output, report.str());
    return 0;
  }
  Json out;
  out["kind"] = "convex_table_verify";
  out["summary"] = report.str();
  out["failures"] = failures;
  write_output(opts.output, out.dump(1));
  return 1;
}

struct ConvexityOpts : InputOpts {
  bool certificate = false;
  bool strict = false;
};

bool interior_in_top_cell(const AnalyticCurve& curve) {
  const int n = 256;
  if (curve.dim == 4) {
    const std::vector<SpinPair> lift = lifted_frenet_path4(curve, n);
    const SpinPair abar{UnitQuat::normalized(Quat{-1.0, 0.0, 0.0, 0.0}),
                        UnitQuat::normalized(Quat{0.0, 0.0, 0.0, 1.0})};
    for (int i = 1; i < n; ++i) {
      if (distance(identify_cell_spin(lift[static_cast<std::size_t>(i)]).rep, abar) > 1e-9)
        return false;
    }
    return true;
  }
  const MatX base = frenet(curve, 0.0).frame;
  const SignedPermutation target = signed_perm_from_matrix(arnold_matrix(2));
  for (int i = 1; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    try {
      if (!(identify_cell(base.transpose() * frenet(curve, t).frame).cell == target))
        return false;
    } catch (const DegeneratePivot&) {
      return false;
    }
  }
  return true;
}

int run_convexity(const ConvexityOpts& opts) {
  require_json(opts);
  AnalyticCurve curve = curve_from_json(read_json_input(opts.input), solve_density(opts));
  Json out;
  out["kind"] = "convexity";
  out["label"] = curve.label;
  const ScanResult local = is_locally_convex(curve);
  out["locally_convex"] = local.ok;
  out["local_margin"] = local.margin;
  std::string verdict;
  if (!local.ok) {
    verdict = "nonconvex";
    out["reason"] = "local convexity fails";
    out["witness_t"] = local.witness;
  }
  if (verdict.empty() && opts.certificate) {
    if (auto cert = nonconvexity_certificate(curve, opts.seed)) {
      verdict = "nonconvex";
      out["certificate"] = certificate_to_json(*cert);
    }
  }
  if (verdict.empty()) verdict = interior_in_top_cell(curve) ? "convex" : "inconclusive";
  out["verdict"] = verdict;
  write_output(opts.output, out.dump(1));
  return (verdict == "inconclusive" && opts.strict) ? 2 : 0;
}

int fail(const std::string& type, const std::string& message, Json extra = Json::object()) {
  Json err;
  err["type"] = type;
  err["message"] = message;
  err.update(extra);
  Json out;
  out["error"] = err;
  std::cerr << out.dump(1) << "\n";
  return 1;
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"local convexity toolkit for curves on spheres"};
  app.require_subcommand(1);

  ExampleOpts example_opts;
  CLI::App* example = app.add_subcommand("example", "emit a built-in example curve");
  example->add_option("name", example_opts.name, "sigma|meridian|gamma1|gamma2|gamma3|gamma4")
      ->required()
      ->check(CLI::IsMember({"sigma", "meridian", "gamma1", "gamma2", "gamma3", "gamma4"}));
  example->add_option("--m", example_opts.m, "iterate count")->check(CLI::Range(1, 64));
  example->add_option("--c", example_opts.c, "length for sigma, in (0, 2*pi]");
  add_common(example, example_opts);

  InputOpts integrate_opts;
  CLI::App* integrate = app.add_subcommand("integrate", "solve a curve from coefficient data");
  integrate->add_option("input", integrate_opts.input, "coefficient JSON, '-' for stdin");
  add_common(integrate, integrate_opts);

  InputOpts decompose_opts;
  CLI::App* decompose = app.add_subcommand("decompose", "split a space curve into a spherical pair");
  decompose->add_option("input", decompose_opts.input, "curve JSON, '-' for stdin");
  add_common(decompose, decompose_opts);

  InputOpts fuse_opts;
  CLI::App* fuse_cmd = app.add_subcommand("fuse", "rebuild a space curve from a spherical pair");
  fuse_cmd->add_option("input", fuse_opts.input, "pair JSON, '-' for stdin");
  add_common(fuse_cmd, fuse_opts);

  InputOpts classify_opts;
  CLI::App* classify = app.add_subcommand("classify", "identify the cell of a frame or spin pair");
  classify->add_option("input", classify_opts.input, "matrix or spin JSON, '-' for stdin");
  add_common(classify, classify_opts);

  ChopOpts chop_opts;
  CLI::App* chop = app.add_subcommand("chop", "apply the chopping map to a frame or spin pair");
  chop->add_option("input", chop_opts.input, "matrix or spin JSON, '-' for stdin");
  chop->add_flag("--plus", chop_opts.plus, "use the forward chop instead of the backward one");
  add_common(chop, chop_opts);

  TableOpts table_opts;
  CLI::App* table = app.add_subcommand("convex-table", "list or verify the convex endpoint table");
  table->add_flag("--verify", table_opts.verify, "recompute every row and report pass/fail");
  add_common(table, table_opts);

  ConvexityOpts convexity_opts;
  CLI::App* convexity = app.add_subcommand("convexity", "classify a curve as convex or not");
  convexity->add_option("input", convexity_opts.input, "curve JSON, '-' for stdin");
  convexity->add_flag("--certificate", convexity_opts.certificate,
                      "search for a hyperplane witnessing nonconvexity");
  convexity->add_flag("--strict", convexity_opts.strict, "exit 2 when the verdict is inconclusive");
  convexity->add_option("--seed", convexity_opts.seed, "seed for the certificate search");
  add_common(convexity, convexity_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*example) return run_example(example_opts);
  if (*integrate) return run_integrate(integrate_opts);
  if (*decompose) return run_decompose(decompose_opts);
  if (*fuse_cmd) return run_fuse(fuse_opts);
  if (*classify) return run_classify(classify_opts);
  if (*chop) return run_chop(chop_opts);
  if (*table) return run_convex_table(table_opts);
  if (*convexity) return run_convexity(convexity_opts);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  try {
    return dispatch(argc, argv);
  } catch (const NonPositiveCoefficient& e) {
    return fail("non_positive_coefficient", e.what(), Json{{"index", e.index}, {"t", e.t}});
  } catch (const PairConditionViolated& e) {
    return fail("pair_condition_violated", e.what(), Json{{"which", e.which}, {"t", e.t}});
  } catch (const ConditionViolated& e) {
    return fail("condition_violated", e.what(), Json{{"which", e.which}, {"t", e.t}});
  } catch (const TangencyUnresolved& e) {
    return fail("tangency_unresolved", e.what(), Json{{"t", e.t}});
  } catch (const ImmersionLost& e) {
    return fail("immersion_lost", e.what(), Json{{"t", e.t}});
  } catch (const FirstCoordinateVanishes& e) {
    return fail("first_coordinate_vanishes", e.what(), Json{{"t", e.t}});
  } catch (const CurvatureUnderflow& e) {
    return fail("curvature_underflow", e.what(), Json{{"t", e.t}});
  } catch (const NotGeneric& e) {
    return fail("not_generic", e.what(), Json{{"t", e.t}});
  } catch (const StepTooLarge& e) {
    return fail("step_too_large", e.what(), Json{{"index", e.index}});
  } catch (const DegeneratePivot& e) {
    return fail("degenerate_pivot", e.what(), Json{{"column", e.column}});
  } catch (const ParseError& e) {
    return fail("parse_error", e.what(), Json{{"position", e.position}});
  } catch (const Inconclusive& e) {
    return fail("inconclusive", e.what());
  } catch (const InvalidInput& e) {
    return fail("invalid_input", e.what());
  } catch (const NoStableCell& e) {
    return fail("no_stable_cell", e.what());
  } catch (const WindowOverflow& e) {
    return fail("window_overflow", e.what());
  } catch (const BadLength& e) {
    return fail("bad_length", e.what());
  } catch (const BadSignature& e) {
    return fail("bad_signature", e.what());
  } catch (const SingularInput& e) {
    return fail("singular_input", e.what());
  } catch (const NegativeOrientation& e) {
    return fail("negative_orientation", e.what());
  } catch (const NotUnit& e) {
    return fail("not_unit", e.what());
  } catch (const NotSkew& e) {
    return fail("not_skew", e.what());
  } catch (const NotSpecialOrthogonal& e) {
    return fail("not_special_orthogonal", e.what());
  } catch (const Error& e) {
    return fail("error", e.what());
  } catch (const Json::exception& e) {
    return fail("json", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}

}  // namespace locconvex
