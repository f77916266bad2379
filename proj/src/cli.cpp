#include "gfnet/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gfnet/config.hpp"
#include "gfnet/error.hpp"
#include "gfnet/fem.hpp"
#include "gfnet/mesh_io.hpp"
#include "gfnet/model.hpp"
#include "gfnet/pipeline.hpp"
#include "gfnet/plot.hpp"
#include "gfnet/solver.hpp"
#include "gfnet/text_io.hpp"

namespace gfnet {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::optional<long> seed;
  std::optional<int> workers;
  std::string out;
  std::string model;
  std::optional<double> fine_tune_s;
  std::string input;
  std::string green;
  std::string csv;
  std::string svg;
  int resolution = 101;
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse_failure:
    case ErrorKind::unknown_name:
    case ErrorKind::invalid_argument:
    case ErrorKind::invalid_geometry:
    case ErrorKind::domain_mismatch:
    case ErrorKind::io_failure:
    case ErrorKind::empty_sample_set:
      return 2;
    default:
      return 1;
  }
}

RunConfig resolve(const Options& o) {
  if (o.config.empty()) throw Error(ErrorKind::invalid_argument, "--config is required");
  RunConfig cfg = load_config(o.config);
  if (o.seed) {
    if (*o.seed < 0) throw Error(ErrorKind::invalid_argument, "--seed must be non-negative");
    cfg.training.seed = static_cast<std::uint64_t>(*o.seed);
  }
  if (const char* env = std::getenv("GF_WORKERS"); env && *env) {
    try {
      cfg.workers = static_cast<int>(parse_long(env));
    } catch (const Error&) {
      throw Error(ErrorKind::invalid_argument, "GF_WORKERS is not an integer");
    }
  }
  if (o.workers) cfg.workers = *o.workers;
  if (!o.out.empty()) cfg.out = o.out;
  cfg.validate();
  return cfg;
}

fs::path model_dir(const Options& o, const RunConfig& cfg) { return o.model.empty() ? cfg.out / "model" : fs::path(o.model); }

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io_failure, "cannot write " + path.string());
  f << text;
}

std::string describe(const char* name, const TriMesh& m) {
  std::ostringstream s;
  s << name << " vertices=" << m.vertices.size() << " interior=" << m.interior_count()
    << " triangles=" << m.triangles.size() << '\n';
  return s.str();
}

int cmd_mesh(const RunConfig& cfg, std::ostream& out) {
  const Domain domain = make_domain(cfg);
  const MeshSet meshes = build_meshes(cfg, domain);
  fs::create_directories(cfg.out);
  if (!cfg.source) {
    save_mesh(cfg.out / "xi.gfmesh", meshes.xi);
    out << describe("xi", meshes.xi);
  }
  const char* names[] = {"x1", "x2", "x3"};
  for (std::size_t i = 0; i < 3; ++i) {
    save_mesh(cfg.out / (std::string(names[i]) + ".gfmesh"), meshes.x.level[i]);
    out << describe(names[i], meshes.x.level[i]);
  }
  for (std::size_t i = 0; i < meshes.quad.size(); ++i) {
    const std::string name = "quad_" + std::to_string(i);
    save_mesh(cfg.out / (name + ".gfmesh"), meshes.quad[i]);
    out << describe(name.c_str(), meshes.quad[i]);
  }
  const TrainingSet set = build_training_set(cfg, domain, meshes, cfg.sampling.s);
  std::ofstream samples(cfg.out / "samples.gfsamp", std::ios::binary);
  write_samples(samples, set.blocks);
  std::size_t pairs = 0;
  for (const auto& b : set.blocks) pairs += b.pair_count();
  out << "blocks=" << set.blocks.size() << " pairs=" << pairs << '\n';
  return 0;
}

int cmd_train(const RunConfig& cfg, const Options& o, std::ostream& out, std::ostream& err) {
  const Domain domain = make_domain(cfg);
  const ProblemSpec problem = make_problem(cfg);
  const MeshSet meshes = build_meshes(cfg, domain);
  TrainAllResult res;
  fs::path dest;
  if (o.fine_tune_s) {
    const GreensModel base = load_model(model_dir(o, cfg));
    if (!(*o.fine_tune_s > 0.0 && *o.fine_tune_s <= base.s))
      throw Error(ErrorKind::invalid_argument, "--fine-tune-s must lie in (0, " + format_double(base.s) + "]");
    const TrainingSet set = build_training_set(cfg, domain, meshes, *o.fine_tune_s);
    res = fine_tune(base, set.blocks, problem, *o.fine_tune_s, cfg.training, cfg.weights, cfg.workers);
    dest = cfg.out / ("model_s" + format_double(*o.fine_tune_s));
  } else {
    const TrainingSet set = build_training_set(cfg, domain, meshes, cfg.sampling.s);
    res = train_all(set.blocks, problem, set.partition, cfg.sampling.s, cfg.network, cfg.training, cfg.weights,
                    cfg.workers);
    dest = cfg.out / "model";
  }
  save_model(dest, res.model);
  std::ostringstream reports;
  for (const auto& r : res.reports) write_report(reports, r);
  write_file(cfg.out / (o.fine_tune_s ? "fine_tune_report.txt" : "train_report.txt"), reports.str());
  out << reports.str();
  out << "model=" << dest.string() << " blocks=" << res.model.blocks.size() << " s=" << format_double(res.model.s)
      << '\n';
  if (res.model.partial) {
    err << "warning: partial model, some blocks failed to train\n";
    return 1;
  }
  return 0;
}

struct MeshSolve {
  const TriMesh* mesh = nullptr;
  double h = 0.0;
  std::vector<int> vertices;  // interior vertex indices
  FieldSolution solution;
  double seconds = 0.0;
  std::optional<double> error;
};

std::vector<MeshSolve> solve_meshes(const RunConfig& cfg, const GreensModel& model, const ProblemSpec& problem,
                                    const MeshSet& meshes) {
  if (!(model.domain == problem.domain)) throw Error(ErrorKind::domain_mismatch, "model was trained on another domain");
  const LearnedKernel kernel(model);
  std::vector<MeshSolve> out;
  for (std::size_t i = 0; i < meshes.quad.size(); ++i) {
    MeshSolve ms;
    ms.mesh = &meshes.quad[i];
    ms.h = cfg.quad_h[i];
    ms.vertices = interior_vertex_indices(*ms.mesh);
    std::vector<Point2> pts;
    for (int v : ms.vertices) pts.push_back(ms.mesh->vertices[static_cast<std::size_t>(v)]);
    const auto t0 = std::chrono::steady_clock::now();
    const QuadraturePlan plan = make_plan(problem, *ms.mesh);
    ms.solution = solve_field(kernel, plan, problem.domain, pts, cfg.workers);
    ms.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (problem.exact_u && ms.solution.ok()) {
      std::vector<double> exact, weights;
      for (int v : ms.vertices) {
        exact.push_back((*problem.exact_u)(ms.mesh->vertices[static_cast<std::size_t>(v)]));
        weights.push_back(ms.mesh->dual_area[static_cast<std::size_t>(v)]);
      }
      ms.error = relative_l2_error(exact, ms.solution.values, weights);
    }
    out.push_back(std::move(ms));
  }
  return out;
}

int report_failures(const std::vector<MeshSolve>& solves, std::ostream& err) {
  int failures = 0;
  for (const auto& s : solves)
    for (std::size_t i = 0; i < s.solution.errors.size(); ++i)
      if (!s.solution.errors[i].empty()) {
        if (failures++ < 10) err << "point " << i << ": " << s.solution.errors[i] << '\n';
      }
  return failures;
}

int cmd_solve(const RunConfig& cfg, const Options& o, bool table, std::ostream& out, std::ostream& err) {
  const ProblemSpec problem = make_problem(cfg);
  const GreensModel model = load_model(model_dir(o, cfg));
  MeshSet meshes;
  for (double h : cfg.quad_h) meshes.quad.push_back(generate_mesh(problem.domain, h));
  const auto solves = solve_meshes(cfg, model, problem, meshes);
  for (const auto& s : solves) {
    out << "# mesh h=" << format_double(s.h) << " vertices=" << s.mesh->vertices.size()
        << " interior=" << s.vertices.size() << '\n';
    if (table) {
      out << "# x1 x2 u_pred" << (problem.exact_u ? " u_exact abs_err" : "") << '\n';
      for (std::size_t i = 0; i < s.vertices.size(); ++i) {
        const Point2 p = s.mesh->vertices[static_cast<std::size_t>(s.vertices[i])];
        const double u = s.solution.values[i];
        out << format_double(p.x1) << ' ' << format_double(p.x2) << ' ' << format_double(u);
        if (problem.exact_u) {
          const double e = (*problem.exact_u)(p);
          out << ' ' << format_double(e) << ' ' << format_double(std::abs(u - e));
        }
        out << '\n';
      }
    }
    if (s.error) out << "rel_l2_error=" << format_double(*s.error) << '\n';
  }
  if (!table && model.blocks.size() == 1 && cfg.source && model.domain.kind() == DomainKind::disk &&
      *cfg.source == Point2{0.0, 0.0}) {
    const GFNetParams& net = model.blocks.begin()->second;
    out << "green_error="
        << format_double(green_error_disk([&](Point2 x) { return forward(net, x, {0.0, 0.0}); }, model.s)) << '\n';
  }
  return report_failures(solves, err) ? 1 : 0;
}

int cmd_compare_fem(const RunConfig& cfg, const Options& o, std::ostream& out, std::ostream& err) {
  const ProblemSpec problem = make_problem(cfg);
  if (!problem.exact_u) throw Error(ErrorKind::invalid_argument, "compare-fem needs a problem with an exact solution");
  const GreensModel model = load_model(model_dir(o, cfg));
  MeshSet meshes;
  for (double h : cfg.quad_h) meshes.quad.push_back(generate_mesh(problem.domain, h));
  const auto solves = solve_meshes(cfg, model, problem, meshes);
  if (report_failures(solves, err)) return 1;
  out << "h vertices gfnet_error gfnet_seconds fem_error fem_seconds\n";
  for (const auto& s : solves) {
    const FemSolution fem = fem_solve(*s.mesh, problem);
    std::vector<double> exact, pred, weights;
    for (int v : s.vertices) {
      const auto k = static_cast<std::size_t>(v);
      exact.push_back((*problem.exact_u)(s.mesh->vertices[k]));
      pred.push_back(fem.values[k]);
      weights.push_back(s.mesh->dual_area[k]);
    }
    out << format_double(s.h) << ' ' << s.mesh->vertices.size() << ' ' << format_double(*s.error) << ' '
        << format_double(s.seconds) << ' ' << format_double(relative_l2_error(exact, pred, weights)) << ' '
        << format_double(fem.seconds) << '\n';
  }
  return 0;
}

int cmd_plot(const Options& o, std::ostream& out) {
  std::vector<FieldPoint> field;
  if (!o.input.empty()) {
    std::ifstream in(o.input);
    if (!in) throw Error(ErrorKind::io_failure, "cannot open " + o.input);
    field = read_field_table(in);
  } else if (!o.green.empty()) {
    const RunConfig cfg = resolve(o);
    std::istringstream g(o.green);
    std::string a, b;
    if (!(g >> a >> b)) throw Error(ErrorKind::invalid_argument, "--green expects \"xi1 xi2\"");
    const Point2 xi{parse_double(a), parse_double(b)};
    const GreensModel model = load_model(model_dir(o, cfg));
    const GFNetParams& net = model.network_for(xi);
    for (const Point2 p : lattice_points(model.domain, o.resolution)) field.push_back({p, forward(net, p, xi)});
  } else {
    throw Error(ErrorKind::invalid_argument, "plot needs --input or --green");
  }
  if (o.csv.empty()) {
    write_field_csv(out, field);
  } else {
    std::ostringstream s;
    write_field_csv(s, field);
    write_file(o.csv, s.str());
  }
  if (!o.svg.empty()) {
    std::ostringstream s;
    write_field_svg(s, field);
    write_file(o.svg, s.str());
  }
  return 0;
}

int cmd_ablate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MeshSet meshes = build_meshes(cfg, make_domain(cfg));
  struct Row {
    Activation act;
    double lambda_s;
  };
  std::ostringstream report;
  auto run = [&](const Row& row) {
    RunConfig c = cfg;
    c.network.activation = row.act;
    c.weights.lambda_s = row.lambda_s;
    const DiskVariant v = train_disk_variant(c, meshes);
    err << "activation=" << to_string(row.act) << " lambda_s=" << format_double(row.lambda_s)
        << " seconds=" << format_double(v.report.wall_seconds) << '\n';
    return v;
  };
  const DiskVariant base = run({Activation::sin, 1.0});
  auto line = [&](Activation act, double ls, const DiskVariant& v) {
    report << "activation=" << to_string(act) << " lambda_s=" << format_double(ls)
           << " green_error=" << format_double(v.green_error) << " asymmetry=" << format_double(v.asymmetry)
           << " final_loss=" << format_double(v.report.final_loss) << '\n';
  };
  report << "# activation sweep\n";
  line(Activation::sin, 1.0, base);
  for (Activation act : {Activation::tanh, Activation::sigmoid}) line(act, 1.0, run({act, 1.0}));
  report << "# symmetry sweep\n";
  line(Activation::sin, 1.0, base);
  line(Activation::sin, 0.0, run({Activation::sin, 0.0}));
  write_file(cfg.out / "ablation.txt", report.str());
  out << report.str();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Green's function networks for 2D reaction-diffusion problems", "gfnet"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI run configuration");
    sub->add_option("--seed", o.seed, "override run.seed");
    sub->add_option("--workers", o.workers, "override run.workers and GF_WORKERS");
    sub->add_option("--out", o.out, "override run.out");
  };
  auto with_model = [&](CLI::App* sub) { sub->add_option("--model", o.model, "model directory (default <out>/model)"); };

  CLI::App* mesh = app.add_subcommand("mesh", "write xi-, x- and quadrature meshes and the sample dump");
  common(mesh);
  CLI::App* train = app.add_subcommand("train", "train one network per occupied xi-block");
  common(train);
  with_model(train);
  train->add_option("--fine-tune-s", o.fine_tune_s, "warm-start the model on a sharper mollifier");
  CLI::App* solve = app.add_subcommand("solve", "solution table at the quadrature-mesh vertices");
  common(solve);
  with_model(solve);
  CLI::App* eval = app.add_subcommand("eval", "error summary per quadrature mesh");
  common(eval);
  with_model(eval);
  CLI::App* fem = app.add_subcommand("compare-fem", "GF-Net and P1 FEM errors and timings");
  common(fem);
  with_model(fem);
  CLI::App* plot = app.add_subcommand("plot", "CSV (and SVG) of a solution table or a learned Green's function");
  common(plot);
  with_model(plot);
  plot->add_option("--input", o.input, "solution table to convert");
  plot->add_option("--green", o.green, "source point \"xi1 xi2\" of a Green's function plot");
  plot->add_option("--csv", o.csv, "CSV output file (default stdout)");
  plot->add_option("--svg", o.svg, "SVG output file");
  plot->add_option("--resolution", o.resolution, "lattice points per side for --green");
  CLI::App* ablate = app.add_subcommand("ablate", "activation and symmetry-penalty sweeps on the single-source disk");
  common(ablate);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(plot)) return cmd_plot(o, out);
    const RunConfig cfg = resolve(o);
    if (app.got_subcommand(mesh)) return cmd_mesh(cfg, out);
    if (app.got_subcommand(train)) return cmd_train(cfg, o, out, err);
    if (app.got_subcommand(solve)) return cmd_solve(cfg, o, true, out, err);
    if (app.got_subcommand(eval)) return cmd_solve(cfg, o, false, out, err);
    if (app.got_subcommand(fem)) return cmd_compare_fem(cfg, o, out, err);
    if (app.got_subcommand(ablate)) return cmd_ablate(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace gfnet
