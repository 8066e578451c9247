#include "commands.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "foamlab/error.hpp"
#include "foamlab/functionals.hpp"
#include "foamlab/json_util.hpp"
#include "foamlab/optimizer.hpp"
#include "foamlab/plateau.hpp"
#include "foamlab/voronoi.hpp"

namespace foamlab::cli {
namespace {

const char* kModule = "cli-reporting";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, kModule, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, kModule, "cannot write " + path);
  f << text;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

nlohmann::json estimate_json(const std::string& name, const Estimate& e, const MonteCarloConfig& cfg,
                             const std::string& lattice, const std::string& parameter, double value) {
  return {{"functional", name},
          {"value", e.value},
          {"stderr", e.std_error},
          {"samples_used", e.samples_used},
          {"config", {{"lattice", lattice}, {parameter, value}, {"samples", cfg.samples}, {"seed", cfg.seed},
                      {"batches", cfg.batches}}}};
}

// One quantity checked by `reproduce prop5`.
struct Check {
  std::string name;
  double computed;
  double expected;
  double tol;
};

int reproduce_prop5(std::ostream& out) {
  const double sqrt2 = std::sqrt(2.0);
  const double sqrt3 = std::sqrt(3.0);
  const Lattice fcc = catalog(CatalogName::Fcc, 3);
  const Lattice bcc = catalog(CatalogName::Bcc, 3);
  const Lattice d4 = catalog(CatalogName::D, 4);

  const KelvinBoundReport kelvin = kelvin_bound_check();
  const PlateauReport pf = plateau_check(fcc, 0.1, "fcc");
  const PlateauReport pd = plateau_check(d4, 0.1, "d4");
  const EdgeAngleReport edge = bcc_edge_angles();
  int fcc_max_chambers = 0;
  for (const auto& f : pf.faces) fcc_max_chambers = std::max(fcc_max_chambers, f.signature.chamber_count);
  int d4_vertex_chambers = 0;
  for (const auto& f : pd.faces)
    if (f.face_dim == 0) d4_vertex_chambers = std::max(d4_vertex_chambers, f.signature.chamber_count);

  const std::vector<Check> checks = {
      {"ratio(fcc)", iso_ratio(voronoi_cell(fcc)), 12.0 * sqrt2, 1e-6},
      {"ratio(bcc)", iso_ratio(voronoi_cell(bcc)), 4.0 * (2.0 * sqrt3 + 1.0), 1e-6},
      {"kelvin lower bound", kelvin.kelvin_lower_bound, 0.998 * 4.0 * (2.0 * sqrt3 + 1.0), 1e-6},
      {"kelvin excluded", kelvin.kelvin_excluded ? 1.0 : 0.0, 1.0, 0.0},
      {"plateau(fcc) pass", pf.pass ? 1.0 : 0.0, 0.0, 0.0},
      {"plateau(fcc) max chambers", static_cast<double>(fcc_max_chambers), 6.0, 0.0},
      {"plateau(d4) pass", pd.pass ? 1.0 : 0.0, 1.0, 0.0},
      {"plateau(d4) vertex chambers", static_cast<double>(d4_vertex_chambers), 8.0, 0.0},
      {"bcc edge min angle", edge.signature.angle_data.front(), std::acos(-1.0 / 3.0) * 180.0 / M_PI, 1e-6},
      {"bcc edge max angle", edge.signature.angle_data.back(),
       90.0 + std::atan(1.0 / sqrt2) * 180.0 / M_PI, 1e-6},
      {"bcc edge angle sum", edge.angle_sum_deg, 360.0, 1e-9},
  };

  bool ok = true;
  out << std::left << std::setw(30) << "quantity" << std::setw(20) << "computed" << std::setw(20) << "expected"
      << "status\n";
  for (const Check& c : checks) {
    const bool good = std::abs(c.computed - c.expected) <= c.tol;
    ok = ok && good;
    out << std::left << std::setw(30) << c.name << std::setw(20) << fmt(c.computed) << std::setw(20)
        << fmt(c.expected) << (good ? "ok" : "DRIFT (diff " + fmt(c.computed - c.expected) + ")") << '\n';
  }
  out << (ok ? "reproduce prop5: all quantities match\n" : "reproduce prop5: drift detected\n");
  return ok ? 0 : 1;
}

std::string info_text(const Lattice& l, const std::string& name, const std::string& format) {
  const double det = l.determinant();
  const double lambda = minimal_norm(l);
  const ReducedBasis red = reduce_basis(l);
  const std::size_t relevant = l.dim() <= kMaxEnumerationDim ? relevant_vectors(l).vectors.size() : 0;
  const bool has_cover = l.dim() <= 4;
  const double cover = has_cover ? covering_radius(l) : 0.0;
  if (format == "json") {
    nlohmann::json j = {{"lattice", name},       {"dim", l.dim()},
                        {"determinant", det},    {"minimal_norm", lambda},
                        {"inradius", lambda / 2}, {"relevant_vectors", relevant},
                        {"reduced_product_ratio", red.product_ratio}, {"basis", to_json(l.basis())}};
    if (has_cover) j["covering_radius"] = cover;
    return j.dump(2);
  }
  std::ostringstream os;
  os << std::left << std::setw(24) << "lattice" << name << '\n'
     << std::setw(24) << "dim" << l.dim() << '\n'
     << std::setw(24) << "determinant d" << fmt(det) << '\n'
     << std::setw(24) << "minimal norm lambda" << fmt(lambda) << '\n'
     << std::setw(24) << "inradius rho" << fmt(lambda / 2) << '\n'
     << std::setw(24) << "covering radius r" << (has_cover ? fmt(cover) : std::string("n/a (dim > 4)")) << '\n'
     << std::setw(24) << "relevant vectors" << relevant << '\n'
     << std::setw(24) << "reduced product ratio" << fmt(red.product_ratio) << '\n';
  return os.str();
}

std::string domain_text(const DomainCheckReport& r) {
  nlohmann::json j = {{"cell_volume", r.cell_volume},
                      {"lattice_determinant", r.lattice_determinant},
                      {"volume_gap_relative", r.volume_gap_relative},
                      {"volume_pass", r.volume_pass},
                      {"max_overlap_fraction", r.max_overlap_fraction},
                      {"overlap_threshold", r.overlap_threshold},
                      {"overlap_pass", r.overlap_pass},
                      {"uncovered_fraction", r.uncovered_fraction},
                      {"covering_pass", r.covering_pass},
                      {"verdict", r.pass ? "PASS" : "FAIL"},
                      {"config", {{"samples", r.samples}, {"seed", r.seed}}}};
  return j.dump(2);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

Lattice lattice_from_json_string(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const auto rows = j.at("basis").get<std::vector<std::vector<double>>>();
    const int n = j.contains("dim") ? j.at("dim").get<int>() : static_cast<int>(rows.size());
    if (static_cast<int>(rows.size()) != n) throw Error(ErrorCode::ParseError, kModule, "basis must have dim rows");
    Mat b(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
        throw Error(ErrorCode::ParseError, kModule, "basis rows must have dim entries");
      }
      for (int k = 0; k < n; ++k) b(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    return make_lattice(b);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, kModule, e.what());
  }
}

std::string lattice_to_json_string(const Lattice& lattice) {
  const nlohmann::json j = {{"dim", lattice.dim()}, {"basis", to_json(lattice.basis())}};
  return j.dump(2);
}

Lattice resolve_lattice(const std::string& source, int dim) {
  if (source.size() > 5 && source.substr(source.size() - 5) == ".json") {
    return lattice_from_json_string(read_file(source));
  }
  std::string lower;
  for (char c : source) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  try {
    const CatalogName name = parse_catalog_name(lower);
    const int fixed = catalog_fixed_dim(name);
    const int n = dim > 0 ? dim : fixed;
    if (n < 0) throw Error(ErrorCode::DimensionMismatch, kModule, "'" + source + "' needs a dimension (e.g. d4 or --dim)");
    return catalog(name, n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnknownCatalogEntry) throw;
  }
  std::size_t cut = lower.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(lower[cut - 1]))) --cut;
  if (cut == lower.size() || cut == 0) {
    throw Error(ErrorCode::UnknownCatalogEntry, kModule, "unknown lattice '" + source + "'");
  }
  const int n = std::stoi(lower.substr(cut));
  if (dim > 0 && dim != n) throw Error(ErrorCode::DimensionMismatch, kModule, "conflicting dimensions for " + source);
  return catalog(parse_catalog_name(lower.substr(0, cut)), n);
}

std::string export_cell(const Lattice& lattice, const std::string& format) {
  if (format == "off" && lattice.dim() != 3) {
    throw Error(ErrorCode::UnsupportedFormatForDim, kModule, "OFF export needs a 3-dimensional lattice");
  }
  const Polytope cell = voronoi_cell(normalize_to_inradius(lattice, 1.0));
  if (format == "off") return to_off(cell);
  if (format == "json") return to_json_string(cell);
  throw Error(ErrorCode::UnsupportedFormatForDim, kModule, "unknown cell format '" + format + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"foamlab: lattice tilings, Voronoi cells and isoperimetric ratios"};
  app.require_subcommand(1);

  std::string lattice_src;
  int dim = -1;
  std::string format = "table";
  std::string out_path;
  std::uint64_t seed = 0;
  std::int64_t samples = 200000;
  int batches = 40;
  double s = 0.5;
  double alpha = 1.0;
  double tol_deg = 0.1;
  double exponent = 0.0;
  bool skeleton = false;
  std::string cell_path;

  auto add_lattice = [&](CLI::App* sub) {
    sub->add_option("lattice", lattice_src, "catalog name (fcc, bcc, hex, d4, astar3, ...) or lattice JSON")
        ->required();
    sub->add_option("--dim", dim, "dimension for catalog families");
  };

  auto* info = app.add_subcommand("info", "lattice invariants");
  add_lattice(info);
  info->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

  auto* vor = app.add_subcommand("voronoi", "export the Voronoi cell (normalized to inradius 1)");
  add_lattice(vor);
  vor->add_option("--format", format)->check(CLI::IsMember({"table", "json", "off"}));
  vor->add_option("--out", out_path);
  vor->add_flag("--skeleton", skeleton, "dump the tiling face complex as JSON instead");

  auto* ratio = app.add_subcommand("ratio", "isoperimetric ratio of the Voronoi cell");
  add_lattice(ratio);
  ratio->add_option("--exponent", exponent, "inradius exponent (default N-1)");
  ratio->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

  auto* plat = app.add_subcommand("plateau", "Plateau-condition check of the Voronoi tiling");
  add_lattice(plat);
  plat->add_option("--tol-deg", tol_deg);
  plat->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));
  plat->add_option("--out", out_path);

  auto* frac = app.add_subcommand("fracper", "fractional perimeter of the Voronoi cell (Monte Carlo)");
  add_lattice(frac);
  frac->add_option("--s", s)->required();
  frac->add_option("--seed", seed)->required();
  frac->add_option("--samples", samples);
  frac->add_option("--batches", batches);
  frac->add_option("--cell", cell_path, "polytope JSON instead of the Voronoi cell");
  frac->add_option("--out", out_path);

  auto* riesz = app.add_subcommand("riesz", "Riesz energy of the Voronoi cell (Monte Carlo)");
  add_lattice(riesz);
  riesz->add_option("--alpha", alpha)->required();
  riesz->add_option("--seed", seed)->required();
  riesz->add_option("--samples", samples);
  riesz->add_option("--batches", batches);
  riesz->add_option("--cell", cell_path, "polytope JSON instead of the Voronoi cell");
  riesz->add_option("--out", out_path);

  OptimizerConfig ocfg;
  std::string init_list;
  std::string trace_path;
  auto* opt = app.add_subcommand("optimize", "search lattice space for the smallest Voronoi ratio");
  opt->add_option("--dim", ocfg.dim)->required();
  opt->add_option("--restarts", ocfg.restarts);
  opt->add_option("--seed", ocfg.seed)->required();
  opt->add_option("--max-iters", ocfg.max_iters);
  opt->add_option("--init", init_list, "comma-separated starts, e.g. z,bcc~0.05 (dim 3 default: z,bcc~0.05)");
  opt->add_option("--equivalence-tol", ocfg.equivalence_tol);
  opt->add_option("--out", out_path, "report JSON");
  opt->add_option("--trace", trace_path, "trace CSV (restart,iteration,ratio)");

  auto* dom = app.add_subcommand("check-domain", "fundamental-domain check");
  add_lattice(dom);
  dom->add_option("--cell", cell_path, "polytope JSON (default: the Voronoi cell)");
  dom->add_option("--seed", seed)->required();
  dom->add_option("--samples", samples);

  std::string target;
  auto* rep = app.add_subcommand("reproduce", "recompute reference constants and diff them");
  rep->add_option("target", target)->required()->check(CLI::IsMember({"prop5"}));

  std::vector<std::string> argv_store = {"foamlab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*info) {
      write_output("", info_text(resolve_lattice(lattice_src, dim), lattice_src, format), out);
    } else if (*vor) {
      const Lattice l = resolve_lattice(lattice_src, dim);
      if (skeleton) {
        write_output(out_path, to_json_string(tiling_skeleton(l)), out);
      } else if (format == "table") {
        const Polytope cell = voronoi_cell(normalize_to_inradius(l, 1.0));
        std::ostringstream os;
        os << "vertices " << cell.vertices.size() << "\nfacets " << cell.facets.size() << "\nvolume "
           << fmt(volume(cell)) << "\nsurface " << fmt(surface_area(cell)) << "\n";
        write_output(out_path, os.str(), out);
      } else {
        write_output(out_path, export_cell(l, format), out);
      }
    } else if (*ratio) {
      const Lattice l = resolve_lattice(lattice_src, dim);
      RatioSpec spec;
      if (exponent > 0.0) spec.exponent = exponent;
      const double value = iso_ratio(voronoi_cell(l), spec);
      if (format == "json") {
        write_output("", nlohmann::json({{"lattice", lattice_src}, {"ratio", value},
                                          {"exponent", spec.exponent.value_or(l.dim() - 1)}}).dump(2), out);
      } else {
        out << fmt(value) << '\n';
      }
    } else if (*plat) {
      const PlateauReport r = plateau_check(resolve_lattice(lattice_src, dim), tol_deg, lattice_src);
      write_output(out_path, format == "json" ? to_json_string(r) : to_table(r), out);
    } else if (*frac || *riesz) {
      const Lattice l = resolve_lattice(lattice_src, dim);
      const Polytope cell = cell_path.empty() ? voronoi_cell(l) : polytope_from_json_string(read_file(cell_path));
      const MonteCarloConfig cfg{samples, seed, batches};
      nlohmann::json j = *frac ? estimate_json("fractional_perimeter", fractional_perimeter(cell, s, cfg), cfg,
                                               lattice_src, "s", s)
                               : estimate_json("riesz_energy", riesz_energy(cell, alpha, cfg), cfg, lattice_src,
                                               "alpha", alpha);
      if (!cell_path.empty()) j["config"]["cell"] = cell_path;
      write_output(out_path, j.dump(2), out);
    } else if (*opt) {
      ocfg.initial = split_list(init_list);
      if (init_list.empty() && ocfg.dim == 3) ocfg.initial = {"z", "bcc~0.05"};
      const OptimizationReport r = optimize(ocfg);
      write_output(out_path, to_json_string(r, ocfg), out);
      if (!trace_path.empty()) write_output(trace_path, trace_csv(r), out);
      if (!out_path.empty()) {
        out << "best ratio " << fmt(r.best_ratio) << " (restart " << r.best_restart << ")\n";
      }
    } else if (*dom) {
      const Lattice l = resolve_lattice(lattice_src, dim);
      const Polytope cell = cell_path.empty() ? voronoi_cell(l) : polytope_from_json_string(read_file(cell_path));
      write_output("", domain_text(fundamental_domain_check(cell, l, samples, seed)), out);
    } else if (*rep) {
      return reproduce_prop5(out);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "[" << kModule << "] " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace foamlab::cli
