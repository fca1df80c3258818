/**
 * @file qshuffle_cli.cpp
 * @brief Command-line front end: exact basis dimensions, kernel codimensions,
 *        q-character tables, refined characters, convex-path data, and the
 *        built-in verification suite.  All output is byte-deterministic.
 */
#include <CLI11.hpp>
#include <qshuffle/parse.hpp>
#include <qshuffle/verify.hpp>

#include <iostream>

namespace {

using namespace qsh;

struct CommonOpts {
  std::string cartan = "sl2";
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("--cartan", o.cartan,
                  "preset (sl2, sl3, b2, toroidal_gl1) or a symmetrized "
                  "matrix like '2,-1;-1,2'")
      ->capture_default_str();
  app->add_option("--out", o.out, "output file (default: stdout)");
  app->add_option("--format", o.format, "json, csv, or latex")
      ->check(CLI::IsMember({"json", "csv", "latex"}))
      ->capture_default_str();
}

CartanData make_cartan(const std::string& s) {
  if (s == "sl2" || s == "sl3" || s == "b2" || s == "toroidal_gl1")
    return CartanData::preset(s);
  return CartanData::loop(parse_cartan_matrix(s));
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

/// Visit every multidegree 0 <= n <= nmax componentwise, lexicographically.
template <typename Fn>
void for_each_multidegree(const std::vector<int>& nmax, Fn&& fn) {
  std::vector<int> n(nmax.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n.size()) {
      fn(n);
      return;
    }
    for (int v = 0; v <= nmax[i]; ++v) {
      n[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

void emit(const Report& rep, const CommonOpts& o) {
  write_output(rep.render(o.format), o.out);
}

int cmd_basis(const CommonOpts& o, const std::string& nmax_s, int dmax) {
  CartanData c = make_cartan(o.cartan);
  std::vector<int> nmax = parse_int_list(nmax_s);
  if (static_cast<int>(nmax.size()) != c.ncolors())
    throw std::invalid_argument("--nmax needs one entry per color");
  std::vector<int> ones(c.ncolors(), 1);
  Report rep;
  rep.title = "cell dimensions of the slope-negative shuffle algebra";
  rep.meta.emplace_back("cartan", o.cartan);
  rep.meta.emplace_back("nmax", nmax_s);
  rep.meta.emplace_back("dmax", std::to_string(dmax));
  ReportTable t;
  t.name = "dimensions";
  t.columns = {"n", "d", "dim"};
  for_each_multidegree(nmax, [&](const std::vector<int>& n) {
    for (int d = 0; d <= dmax; ++d) {
      long dim = total_vars(n) == 0
                     ? (d == 0 ? 1 : 0)
                     : static_cast<long>(basis_s_neg(c, n, d, ones).size());
      t.rows.push_back({join_ints(n), std::to_string(d), std::to_string(dim)});
    }
  });
  rep.tables.push_back(std::move(t));
  emit(rep, o);
  return 0;
}

int cmd_jdim(const CommonOpts& o, const std::string& r_s,
             const std::string& nmax_s, int dmax,
             const std::string& variant) {
  CartanData c = make_cartan(o.cartan);
  std::vector<int> r = parse_int_list(r_s);
  std::vector<int> nmax = parse_int_list(nmax_s);
  if (static_cast<int>(r.size()) != c.ncolors() ||
      static_cast<int>(nmax.size()) != c.ncolors())
    throw std::invalid_argument("--r and --nmax need one entry per color");
  KernelVariant kv =
      variant == "ring" ? KernelVariant::Ring : KernelVariant::Full;
  Report rep;
  rep.title = "kernel cells of the pairing conditions";
  rep.meta.emplace_back("cartan", o.cartan);
  rep.meta.emplace_back("r", r_s);
  rep.meta.emplace_back("variant", variant);
  ReportTable t;
  t.name = "cells";
  t.columns = {"n", "d", "cell_dim", "kernel_dim", "quotient_dim"};
  for_each_multidegree(nmax, [&](const std::vector<int>& n) {
    for (int d = 0; d <= dmax; ++d) {
      KernelCell cell = j_r_kernel(c, r, n, d, kv);
      t.rows.push_back({join_ints(n), std::to_string(d),
                        std::to_string(cell.basis.size()),
                        std::to_string(cell.kernel.size()),
                        std::to_string(cell.codim)});
    }
  });
  rep.tables.push_back(std::move(t));
  emit(rep, o);
  return 0;
}

int cmd_qchar(const CommonOpts& o, const std::string& psi_s,
              const std::string& nmax_s, const std::string& strategy) {
  CartanData c = make_cartan(o.cartan);
  if (!c.is_loop())
    throw std::invalid_argument("qchar runs in loop mode; use a finite type");
  EllWeight psi = parse_ell_weight(c, psi_s);
  std::vector<int> nmax = parse_int_list(nmax_s);
  if (static_cast<int>(nmax.size()) != c.ncolors())
    throw std::invalid_argument("--nmax needs one entry per color");
  CharMode mode =
      strategy == "direct" ? CharMode::Direct : CharMode::Factored;
  QCharacter chi = q_character(c, psi, nmax, mode);
  Report rep;
  rep.title = "support multiplicities of the modified simple module";
  rep.meta.emplace_back("cartan", o.cartan);
  rep.meta.emplace_back("psi", psi_s);
  rep.meta.emplace_back("nmax", nmax_s);
  rep.meta.emplace_back("strategy", strategy);
  ReportTable t;
  t.name = "supports";
  t.columns = {"support", "n", "multiplicity"};
  for (const auto& [s, m] : chi.mult)
    t.rows.push_back({s.to_string(c.params()), join_ints(s.sizes()),
                      std::to_string(m)});
  rep.tables.push_back(std::move(t));
  emit(rep, o);
  return 0;
}

int cmd_refchar(const CommonOpts& o, const std::string& r_s,
                const std::string& nmax_s, int dmax,
                const std::string& variant) {
  CartanData c = make_cartan(o.cartan);
  std::vector<int> r = parse_int_list(r_s);
  std::vector<int> nmax = parse_int_list(nmax_s);
  Report rep;
  rep.title = "refined character coefficients";
  rep.meta.emplace_back("cartan", o.cartan);
  rep.meta.emplace_back("r", r_s);
  rep.meta.emplace_back("variant", variant);
  ReportTable t;
  t.name = "coefficients";
  t.columns = {"n", "d", "coeff"};
  CharSeries s = c.is_loop()
                     ? refined_character(c, r, nmax, dmax,
                                         variant == "full"
                                             ? KernelVariant::Full
                                             : KernelVariant::Ring)
                     : (r.size() == 1 && nmax.size() == 1
                            ? toroidal_refined_character(r[0], nmax[0], dmax)
                            : throw std::invalid_argument(
                                  "toroidal mode needs scalar --r, --nmax"));
  for (const auto& [k, v] : s.coeffs())
    t.rows.push_back(
        {join_ints(k.first), std::to_string(k.second), std::to_string(v)});
  rep.tables.push_back(std::move(t));
  emit(rep, o);
  return 0;
}

int cmd_paths(const CommonOpts& o, int n, int d, int r) {
  CartanData c = CartanData::toroidal();
  Report rep;
  rep.title = "convex paths and pairing values";
  rep.meta.emplace_back("n", std::to_string(n));
  rep.meta.emplace_back("d", std::to_string(d));
  rep.meta.emplace_back("r", std::to_string(r));
  ReportTable t;
  t.name = "paths";
  t.columns = {"steps", "pairing"};
  for (const auto& p : enumerate_paths(n, d, r)) {
    std::string steps;
    for (const auto& [a, b] : p.steps)
      steps += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    t.rows.push_back({steps, path_pairing(c, p).to_string(c.params())});
  }
  rep.tables.push_back(std::move(t));
  emit(rep, o);
  return 0;
}

int cmd_verify(const CommonOpts& o) {
  auto rows = run_verify_suite_with_determinism();
  emit(verify_report(rows), o);
  return all_pass(rows) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact shuffle-algebra computations"};
  app.require_subcommand(1);

  CommonOpts basis_o, jdim_o, qchar_o, refchar_o, paths_o, verify_o;
  std::string basis_nmax = "2", basis_r, jdim_r = "1", jdim_nmax = "2",
              jdim_variant = "ring", qchar_psi, qchar_nmax = "2",
              qchar_strategy = "factored", ref_r = "1", ref_nmax = "2",
              ref_variant = "ring";
  int basis_dmax = 3, jdim_dmax = 3, ref_dmax = 3, paths_n = 2, paths_d = -2,
      paths_r = 1;

  CLI::App* basis = app.add_subcommand("basis", "cell dimensions");
  add_common(basis, basis_o);
  basis->add_option("--nmax", basis_nmax)->capture_default_str();
  basis->add_option("--dmax", basis_dmax)->capture_default_str();

  CLI::App* jdim = app.add_subcommand("jdim", "kernel cells");
  add_common(jdim, jdim_o);
  jdim->add_option("--r", jdim_r)->capture_default_str();
  jdim->add_option("--nmax", jdim_nmax)->capture_default_str();
  jdim->add_option("--dmax", jdim_dmax)->capture_default_str();
  jdim->add_option("--variant", jdim_variant)
      ->check(CLI::IsMember({"ring", "full"}))
      ->capture_default_str();

  CLI::App* qchar = app.add_subcommand("qchar", "support multiplicities");
  add_common(qchar, qchar_o);
  qchar->add_option("--psi", qchar_psi, "ell-weight, components ';'-separated")
      ->required();
  qchar->add_option("--nmax", qchar_nmax)->capture_default_str();
  qchar->add_option("--strategy", qchar_strategy)
      ->check(CLI::IsMember({"factored", "direct"}))
      ->capture_default_str();

  CLI::App* refchar = app.add_subcommand("refchar", "refined characters");
  add_common(refchar, refchar_o);
  refchar->add_option("--r", ref_r)->capture_default_str();
  refchar->add_option("--nmax", ref_nmax)->capture_default_str();
  refchar->add_option("--dmax", ref_dmax)->capture_default_str();
  refchar->add_option("--variant", ref_variant)
      ->check(CLI::IsMember({"ring", "full"}))
      ->capture_default_str();

  CLI::App* paths =
      app.add_subcommand("toroidal-paths", "convex paths and pairings");
  add_common(paths, paths_o);
  paths->add_option("--n", paths_n)->capture_default_str();
  paths->add_option("--d", paths_d)->capture_default_str();
  paths->add_option("--r", paths_r)->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "run the check suite");
  add_common(verify, verify_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (basis->parsed()) return cmd_basis(basis_o, basis_nmax, basis_dmax);
    if (jdim->parsed())
      return cmd_jdim(jdim_o, jdim_r, jdim_nmax, jdim_dmax, jdim_variant);
    if (qchar->parsed())
      return cmd_qchar(qchar_o, qchar_psi, qchar_nmax, qchar_strategy);
    if (refchar->parsed())
      return cmd_refchar(refchar_o, ref_r, ref_nmax, ref_dmax, ref_variant);
    if (paths->parsed()) return cmd_paths(paths_o, paths_n, paths_d, paths_r);
    if (verify->parsed()) return cmd_verify(verify_o);
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 0;
}
