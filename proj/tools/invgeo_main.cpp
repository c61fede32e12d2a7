// Batch front-end: residual checks, functional sweeps, variation reports,
// concavity paths, linearization and cohomology reports over the model catalog.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>

#include "invgeo/cohomology.hpp"
#include "invgeo/linearize.hpp"
#include "invgeo/systems.hpp"
#include "invgeo/variation.hpp"

using namespace invgeo;
using ordered_json = nlohmann::ordered_json;

namespace {

struct GridSpec {
  std::vector<double> values;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  size_t c1 = text.find(':');
  if (c1 == std::string::npos) {
    g.values.push_back(std::stod(text));
    return g;
  }
  size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw CLI::ValidationError("--t", "expected min:max:count");
  double lo = std::stod(text.substr(0, c1));
  double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  int count = std::stoi(text.substr(c2 + 1));
  if (count < 1) throw CLI::ValidationError("--t", "count must be positive");
  for (int i = 0; i < count; ++i)
    g.values.push_back(count == 1 ? lo : lo + (hi - lo) * i / double(count - 1));
  return g;
}

void write_or_print(const std::optional<std::string>& path, const std::string& payload) {
  if (path) {
    std::ofstream out(*path, std::ios::binary);
    out << payload;
  } else {
    std::cout << payload << "\n";
  }
}

GaugeAlgebra trivial_algebra() {
  GaugeAlgebra a;
  a.matrix_dim = 1;
  a.blocks.push_back({0, 1, 1.0});
  return a;
}

struct BaseHolder {
  CatalogEntry entry;
  GaugeAlgebra fallback;
  MetricBase base;
};

BaseHolder make_base(CatalogEntry entry) {
  BaseHolder h{std::move(entry), trivial_algebra(), {}};
  h.base.geometry = h.entry.hermitian.get();
  h.base.algebra = h.entry.bundle ? &h.entry.bundle->algebra : &h.fallback;
  h.base.omega0 = h.entry.hermitian->omega();
  h.base.theta0 = h.entry.bundle ? h.entry.bundle->theta
                                 : VForm(h.entry.model->dim(), 1, h.fallback.matrix_dim);
  return h;
}

Direction random_direction(const BaseHolder& h, std::mt19937_64& rng, double scale = 0.25) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Direction d;
  d.xi = Form(h.entry.model->dim(), 1);
  for (Mask I : degree_masks(h.entry.model->dim(), 1)) d.xi.set(I, scale * u(rng));
  d.s = h.entry.bundle ? h.entry.bundle->algebra.random_compact(rng, scale)
                       : Mat::Zero(1, 1);
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant Hermitian geometry checks over Lie-model catalogs"};
  app.require_subcommand(1);

  std::string model = "hopf";
  double w = 1.0, x_param = -1.0, y_param = 0.0, a_param = 1.0, s_param = 1.0;
  std::string t_spec;
  std::string system = "twisted-hs";
  double tol_exact = 1e-10, tol_quad = 1e-8;
  int quad_order = 64;
  std::uint64_t seed = 1;
  int trials = 25;
  std::optional<std::string> json_path, csv_path;
  std::string dump_name, model_file, bundle_file;
  double tmax = 1.0;
  int samples = 33;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", model, "catalog model name");
    cmd->add_option("--w", w, "Re w (complex-structure parameter)");
    cmd->add_option("--x", x_param, "alias for Re w");
    cmd->add_option("--y", y_param, "Im w");
    cmd->add_option("--a", a_param, "Aeppli parameter a");
    cmd->add_option("--t", t_spec, "metric parameter t, scalar or min:max:count");
    cmd->add_option("--s", s_param, "extra scale parameter (product models)");
    cmd->add_option("--tol", tol_exact, "tolerance for exact identities");
    cmd->add_option("--quad-order", quad_order, "quadrature order");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--json", json_path, "write JSON report to PATH");
    cmd->add_option("--csv", csv_path, "write CSV table to PATH");
  };

  CLI::App* check = app.add_subcommand("check", "run a residual check on a catalog solution");
  add_common(check);
  check->add_option("--system", system, "twisted-hs | hs | calabi | appendix");
  check->add_option("--bundle-file", bundle_file, "attach a bundle description file");

  CLI::App* functional = app.add_subcommand("functional", "dilaton functional sweep");
  add_common(functional);

  CLI::App* variation = app.add_subcommand("variation", "analytic vs FD variation report");
  add_common(variation);
  variation->add_option("--trials", trials, "number of random directions");

  CLI::App* path_cmd = app.add_subcommand("path", "concavity path generation and residuals");
  add_common(path_cmd);
  path_cmd->add_option("--tmax", tmax, "path endpoint");
  path_cmd->add_option("--samples", samples, "grid samples (>= 3)");

  CLI::App* linearize_cmd = app.add_subcommand("linearize", "assemble the linearized operator");
  add_common(linearize_cmd);

  CLI::App* cohomology_cmd = app.add_subcommand("cohomology", "invariant cohomology dimensions");
  add_common(cohomology_cmd);

  CLI::App* symbol_cmd = app.add_subcommand("symbol", "principal symbol ellipticity scan");
  add_common(symbol_cmd);
  symbol_cmd->add_option("--trials", trials, "number of random covectors");

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "list, dump or validate models");
  catalog_cmd->add_option("--dump", dump_name, "print a model in the text format");
  catalog_cmd->add_option("--model-file", model_file, "parse and validate a model file");
  catalog_cmd->add_option("--json", json_path, "write JSON report to PATH");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CatalogParams params;
    params.w_re = (x_param > 0.0) ? x_param : w;
    params.w_im = y_param;
    params.a = a_param;
    params.s = s_param;
    GridSpec grid;
    if (!t_spec.empty()) grid = parse_grid(t_spec);
    if (grid.values.size() == 1) params.t = grid.values[0];
    if (t_spec.empty() && model.rfind("hopf", 0) == 0) params.t = params.a / params.w_re;

    if (catalog_cmd->parsed()) {
      if (!model_file.empty()) {
        LieModel m = load_model_file(model_file);
        ordered_json j;
        j["dim"] = m.dim();
        j["volume"] = m.volume();
        j["unimodular"] = m.unimodular();
        std::vector<long> betti;
        for (int k = 0; k <= m.dim(); ++k) {
          long nk = (long)degree_masks(m.dim(), k).size();
          Eigen::MatrixXcd dk = (k < m.dim())
                                    ? operator_matrix(m.dim(), k, k + 1,
                                                      [&](const Form& f) { return m.d(f); })
                                    : Eigen::MatrixXcd::Zero(0, nk);
          Eigen::MatrixXcd dk1 = (k > 0)
                                     ? operator_matrix(m.dim(), k - 1, k,
                                                       [&](const Form& f) { return m.d(f); })
                                     : Eigen::MatrixXcd::Zero(nk, 0);
          betti.push_back(nk - rank_of(dk) - rank_of(dk1));
        }
        j["invariant_betti"] = betti;
        write_or_print(json_path, j.dump(2));
        return 0;
      }
      if (!dump_name.empty()) {
        CatalogEntry e = load_entry(dump_name, params);
        std::cout << e.model->to_string();
        return 0;
      }
      for (const auto& name : catalog_names()) std::cout << name << "\n";
      return 0;
    }

    if (check->parsed()) {
      CatalogEntry entry = load_entry(model, params);
      if (!bundle_file.empty()) {
        auto bundle = std::make_shared<GaugeBundle>(
            load_bundle_file(bundle_file, entry.model->dim()));
        entry.bundle = bundle;
      }
      Tolerances tol{tol_exact, tol_quad};
      ResidualReport rep = run_system(system, entry, tol);
      for (const auto& [k, p] : std::map<std::string, double>{
               {"w_re", params.w_re}, {"w_im", params.w_im}, {"a", params.a}, {"t", params.t}})
        rep.params[k] = p;
      write_or_print(json_path, rep.to_json());
      return rep.pass() ? 0 : 1;
    }

    if (functional->parsed()) {
      if (grid.values.empty()) grid.values = {params.t};
      CatalogEntry entry = load_entry(model, params);
      std::function<Form(double)> omega_of;
      if (model.rfind("hopf", 0) == 0) {
        const LieModel& m = *entry.model;
        double aa = params.a;
        omega_of = [&m, aa](double t) { return hopf_omega(m, aa, t); };
      } else {
        Form base_omega = entry.hermitian->omega();
        omega_of = [base_omega](double t) { return cd(t) * base_omega; };
      }
      std::vector<SweepRow> rows = sweep_family(*entry.hermitian, omega_of, grid.values);
      write_or_print(csv_path, sweep_to_csv(rows));
      if (json_path) {
        ordered_json j;
        j["model"] = model;
        j["rows"] = rows.size();
        write_or_print(json_path, j.dump(2));
      }
      return 0;
    }

    if (variation->parsed()) {
      BaseHolder holder = make_base(load_entry(model, params));
      std::mt19937_64 rng(seed);
      ordered_json arr = ordered_json::array();
      bool ok = true;
      for (int i = 0; i < trials; ++i) {
        Direction dir = random_direction(holder, rng);
        VariationReport rep = variation_report(model, holder.base, dir, quad_order);
        ok = ok && rep.first_rel_err <= 1e-6 && rep.second_rel_err <= 1e-5;
        arr.push_back(ordered_json::parse(rep.to_json()));
      }
      ordered_json j;
      j["model"] = model;
      j["seed"] = seed;
      j["trials"] = trials;
      j["pass"] = ok;
      j["reports"] = arr;
      write_or_print(json_path, j.dump(2));
      return ok ? 0 : 1;
    }

    if (path_cmd->parsed()) {
      BaseHolder holder = make_base(load_entry(model, params));
      std::mt19937_64 rng(seed);
      DiscretePath path;
      if (holder.entry.bundle && holder.entry.hermitian->n() == 2) {
        Form shape(holder.entry.model->dim(), 1);
        shape.set(0b0001, 0.5);
        Mat s = holder.entry.bundle->algebra.random_compact(rng, 0.3);
        path = generate_surface_path(holder.base, shape, s, tmax, samples, 0.7, quad_order);
      } else {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Form xi(holder.entry.model->dim(), 1);
        for (Mask I : degree_masks(holder.entry.model->dim(), 1)) xi.set(I, 0.2 * u(rng));
        path.s = Mat::Zero(holder.base.algebra->matrix_dim, holder.base.algebra->matrix_dim);
        for (int i = 0; i < samples; ++i) {
          double t = tmax * i / double(samples - 1);
          path.t.push_back(t);
          path.xi.push_back(cd(t) * xi);
        }
      }
      std::vector<SweepRow> rows = sweep_along(holder.base, path, quad_order);
      write_or_print(csv_path, sweep_to_csv(rows));
      bool ok = true;
      for (size_t i = 1; i + 1 < rows.size(); ++i)
        ok = ok && rows[i].residual <= 1e-8 && rows[i].d2M <= 1e-9;
      if (json_path) {
        ordered_json j;
        j["model"] = model;
        j["samples"] = samples;
        j["pass"] = ok;
        write_or_print(json_path, j.dump(2));
      }
      return ok ? 0 : 1;
    }

    if (linearize_cmd->parsed()) {
      BaseHolder holder = make_base(load_entry(model, params));
      LinearOperator op = assemble_linearization(holder.base);
      IndexReport rep = index_report(holder.base, op);
      JacobianComparison cmp = compare_jacobian(op, fd_jacobian(holder.base, quad_order));
      ordered_json j = ordered_json::parse(rep.to_json());
      j["base_is_solution"] = op.base_is_solution;
      j["base_residual"] = op.base_residual;
      j["fd_jacobian_rel_err"] = cmp.worst_rel;
      write_or_print(json_path, j.dump(2));
      return 0;
    }

    if (cohomology_cmd->parsed()) {
      CatalogEntry entry = load_entry(model, params);
      const auto& h = *entry.hermitian;
      ordered_json j;
      j["model"] = model;
      std::vector<long> betti;
      for (int k = 0; k <= h.dim(); ++k) betti.push_back(de_rham_group(h, k).dim());
      j["de_rham"] = betti;
      ordered_json dolbeault = ordered_json::object();
      for (int p = 0; p <= h.n(); ++p)
        for (int q = 0; q <= h.n(); ++q) {
          std::string key = std::to_string(p) + "," + std::to_string(q);
          dolbeault[key] = dolbeault_group(h, p, q).dim();
        }
      j["dolbeault"] = dolbeault;
      j["aeppli_11"] = aeppli_group(h, 1, 1).dim();
      j["aeppli_11_real"] = aeppli_group_real(h, 1).dim();
      j["bott_chern_11"] = bott_chern_group(h, 1, 1).dim();
      PartialMapReport pm = partial_map(h);
      j["partial_map"] = {{"kernel", pm.kernel_dim}, {"image", pm.image_dim},
                          {"h11_a_real", pm.h11_a_real}};
      write_or_print(json_path, j.dump(2));
      return 0;
    }

    if (symbol_cmd->parsed()) {
      CatalogEntry entry = load_entry(model, params);
      EllipticityScan scan = ellipticity_scan(*entry.hermitian, trials, seed);
      write_or_print(json_path, scan.to_json());
      return scan.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
