// orcalc: batch front end for the orcalc library.
//
// Exit codes: 0 success, 1 parse/IO error, 2 false verdict under --strict,
// 3 precondition failure.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orcalc/io.hpp"
#include "orcalc/lab.hpp"
#include "orcalc/orcalc.hpp"

using namespace orcalc;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kParse = 1, kFalse = 2, kPrecondition = 3 };

struct Common {
  std::optional<double> tol;
  std::string out;
};

TolerancePolicy resolve_tol(const Common& c) {
  if (c.tol) return TolerancePolicy::with_residual(*c.tol);
  if (const char* env = std::getenv("ORCALC_TOL"); env && *env) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != std::string(env).size() || !(v > 0.0 && v < 1.0)) {
      throw Error(ErrorKind::ParseError, std::string("ORCALC_TOL must be a number in (0, 1), got ") + env);
    }
    return TolerancePolicy::with_residual(v);
  }
  return {};
}

json tol_json(const TolerancePolicy& t, Index dim) {
  return {{"rank_tol_rel", t.rank_tol_rel(dim, dim)},
          {"rank_rule", t.has_explicit_rank_tol() ? "explicit" : "64*u*max(rows,cols)"},
          {"sym_tol", t.sym_tol()},
          {"residual_tol", t.residual_tol()}};
}

json verdict(bool holds, double margin) { return {{"holds", holds}, {"margin", margin}}; }

HermitianOperator load_hermitian(const std::string& path, const TolerancePolicy& tol) {
  return HermitianOperator(io::load_matrix(path), tol);
}

// columns of the file span S; orthonormalized on load
Subspace load_subspace(const std::string& path, const TolerancePolicy& tol) {
  return orthonormalize(io::load_matrix(path), tol);
}

void require_dims(const HermitianOperator& b, const Subspace& s) {
  if (s.ambient_dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "subspace has " + std::to_string(s.ambient_dim()) +
                                                  " rows, matrix is " + std::to_string(b.dim()) + "x" +
                                                  std::to_string(b.dim()));
  }
}

json cmd_check(const std::string& property, const std::string& bpath, const std::string& spath,
               const TolerancePolicy& tol, bool& holds) {
  const auto b = load_hermitian(bpath, tol);
  const auto s = load_subspace(spath, tol);
  require_dims(b, s);
  json r;
  r["tolerance"] = tol_json(tol, b.dim());
  r["subspace_dim"] = s.dim();
  const auto blk = block_decompose(b, s, tol);
  json residuals = json::object();
  if (property == "complementable") {
    const auto c = complementability_report(b, s, tol);
    holds = c.block_route;
    r["verdict"] = verdict(holds, c.margin);
    r["geometric_route"] = c.geometric_route;
    residuals["route_disagreement"] = c.block_route != c.geometric_route;
  } else if (property == "weak") {
    const auto w = weak_witness(blk, tol);
    holds = w.has_value();
    r["verdict"] = verdict(holds, weak_margin(blk, tol));
    if (w) {
      // b = |a|^{1/2} f and u|a| = a
      const Matrix& h = w->absa_half.matrix();
      residuals["b_factorization"] = rel_distance(h * w->f, blk.b);
      residuals["polar"] = rel_distance(w->u.matrix() * h * h, blk.a.matrix());
      r["f"] = io::matrix_to_json(w->f);
    }
  } else {
    const Subspace bs = range_of(b.matrix() * s.basis(), tol, spectral_norm(b.matrix()));
    holds = is_quasi_complementable(b, s, tol);
    r["verdict"] = verdict(holds, min_angle_sine(bs, s.complement(tol)));
    r["bs_dim"] = bs.dim();
  }
  r["residuals"] = residuals;
  return r;
}

json cmd_schur(const std::string& route, const std::string& bpath, const std::string& spath,
               const TolerancePolicy& tol) {
  const auto b = load_hermitian(bpath, tol);
  const auto s = load_subspace(spath, tol);
  require_dims(b, s);
  json r;
  r["tolerance"] = tol_json(tol, b.dim());
  json residuals = json::object();
  std::optional<Matrix> formula, projected;
  if (route != "projection") formula = schur_complement(b, s, tol).matrix();
  if (route != "formula") {
    const auto e0 = e0_projection(b, s, tol);
    projected = schur_via_projection(b, s, e0, tol).matrix();
    r["e0"] = io::matrix_to_json(e0.matrix());
    const Matrix eb = e0.matrix() * b.matrix();
    residuals["e0_b_hermitian"] = rel_distance(eb, eb.adjoint());
  }
  const Matrix& sc = formula ? *formula : *projected;
  r["schur_complement"] = io::matrix_to_json(sc);
  r["compression"] = io::matrix_to_json(b.matrix() - sc);
  if (formula && projected) residuals["cross_route"] = rel_distance(*formula, *projected);
  residuals["kills_s"] = fro(sc * s.basis()) / std::max(fro(b.matrix()), 1.0);
  r["residuals"] = residuals;
  r["weak_margin"] = weak_margin(block_decompose(b, s, tol), tol);
  return r;
}

json cmd_order(OrderKind kind, const std::string& apath, const std::string& bpath, const TolerancePolicy& tol,
               bool& holds) {
  const Matrix a = io::load_matrix(apath);
  const Matrix b = io::load_matrix(bpath);
  const auto v = order_check(kind, a, b, tol);
  holds = v.holds;
  json r;
  r["tolerance"] = tol_json(tol, std::max(a.rows(), a.cols()));
  r["verdict"] = verdict(v.holds, v.margin);
  if (v.left) r["left_witness"] = io::matrix_to_json(*v.left);
  if (v.right) r["right_witness"] = io::matrix_to_json(*v.right);
  r["residuals"] = {{"witness", v.witness_residual}};
  return r;
}

json cmd_lab(lab::Model model, int n, const lab::Params& p, const TolerancePolicy& tol) {
  const auto pts = lab::run(model, n, p, tol);
  json r;
  r["model"] = lab::to_string(model);
  r["params"] = {{"decay", p.decay}, {"coupling", p.coupling}};
  r["tolerance"] = tol_json(tol, 2 * n);
  json series = json::array();
  bool y0_increasing = true, quasi_decreasing = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& q = pts[i];
    series.push_back({{"n", q.n},
                      {"dim", 2 * q.n},
                      {"weak", verdict(q.weak, q.weak_margin)},
                      {"quasi", verdict(q.quasi, q.quasi_margin)},
                      {"min_angle_sine", q.min_angle_sine},
                      {"f_norm", q.f_norm},
                      {"y0_norm", q.y0_norm}});
    if (i) {
      y0_increasing = y0_increasing && q.y0_norm > pts[i - 1].y0_norm;
      quasi_decreasing = quasi_decreasing && q.quasi_margin < pts[i - 1].quasi_margin;
    }
  }
  r["series"] = series;
  r["trends"] = {{"y0_increasing", y0_increasing}, {"quasi_margin_decreasing", quasi_decreasing}};
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Schur complements and complementability of Hermitian matrices"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", common.tol, "residual and symmetry tolerance (overrides ORCALC_TOL)")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--out", common.out, "also write the report to this file");
  };

  std::string property, matrix, subspace, route = "both", kind, model;
  bool strict = false;
  std::vector<std::string> pair;
  int n = 0;
  lab::Params params;

  auto* check = app.add_subcommand("check", "test a complementability property");
  check->add_option("--property", property)->required()->check(CLI::IsMember({"complementable", "weak", "quasi"}));
  check->add_option("--matrix", matrix, "B as a matrix file")->required();
  check->add_option("--subspace", subspace, "spanning columns of S")->required();
  check->add_flag("--strict", strict, "exit 2 when the property fails");
  add_common(check);

  auto* schur = app.add_subcommand("schur", "compute the Schur complement");
  schur->add_option("--matrix", matrix)->required();
  schur->add_option("--subspace", subspace)->required();
  schur->add_option("--route", route)->check(CLI::IsMember({"formula", "projection", "both"}));
  add_common(schur);

  auto* order = app.add_subcommand("order", "compare A and B in a matrix order");
  order->add_option("--kind", kind)->required()->check(CLI::IsMember({"minus", "left-minus", "prec"}));
  order->add_option("files", pair, "A.json B.json")->required()->expected(2);
  order->add_flag("--strict", strict);
  add_common(order);

  auto* labcmd = app.add_subcommand("lab", "run a truncation family for n = 4, 8, ... up to N");
  labcmd->add_option("--model", model)->required()->check(CLI::IsMember({"ex1", "ex214"}));
  labcmd->add_option("--n", n)->required();
  labcmd->add_option("--decay", params.decay, "diagonal entries i^-decay");
  labcmd->add_option("--coupling", params.coupling, "ex1 off-diagonal block b = coupling*I");
  add_common(labcmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  json report;
  std::vector<std::string> echo(argv, argv + argc);
  report["command"] = echo;
  int code = kOk;
  try {
    const TolerancePolicy tol = resolve_tol(common);
    json body;
    bool holds = true;
    if (check->parsed()) {
      body = cmd_check(property, matrix, subspace, tol, holds);
    } else if (schur->parsed()) {
      body = cmd_schur(route, matrix, subspace, tol);
    } else if (order->parsed()) {
      body = cmd_order(*parse_order_kind(kind), pair[0], pair[1], tol, holds);
    } else {
      body = cmd_lab(*lab::parse_model(model), n, params, tol);
    }
    report.update(body);
    if (strict && !holds) code = kFalse;
  } catch (const Error& e) {
    report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    const bool input = e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::InvalidArgument;
    code = input ? kParse : kPrecondition;
  }
  report["exit_code"] = code;
  report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << report.dump(2) << '\n';
  if (!common.out.empty()) {
    try {
      io::save_json(common.out, report);
    } catch (const Error& e) {
      std::cerr << "orcalc: " << e.what() << '\n';
      return kParse;
    }
  }
  if (report.contains("error")) std::cerr << "orcalc: " << report["error"]["message"].get<std::string>() << '\n';
  return code;
}
