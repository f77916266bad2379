#include "gfnet/pipeline.hpp"

#include "gfnet/error.hpp"
#include "gfnet/solver.hpp"

namespace gfnet {

Domain make_domain(const RunConfig& cfg) { return make_domain(cfg.domain, cfg.domain_params); }

ProblemSpec make_problem(const RunConfig& cfg) {
  const Domain domain = make_domain(cfg);
  ProblemSpec p = builtin_problem(cfg.problem, domain);
  if (!cfg.a_field && !cfg.r_field) return p;
  ScalarField a = cfg.a_field ? parse_field(*cfg.a_field) : p.a;
  ScalarField r = cfg.r_field ? parse_field(*cfg.r_field) : p.r;
  ProblemSpec out = custom_problem(domain, std::move(a), std::move(r), cfg.problem);
  out.name = cfg.problem;
  return out;
}

MeshSet build_meshes(const RunConfig& cfg, const Domain& domain) {
  MeshSet m;
  if (!cfg.source) m.xi = generate_mesh(domain, cfg.xi_h);
  m.x = make_x_meshes(domain, cfg.sampling);
  for (double h : cfg.quad_h) m.quad.push_back(generate_mesh(domain, h));
  return m;
}

std::vector<Point2> source_points(const RunConfig& cfg, const TriMesh& xi_mesh) {
  if (cfg.source) return {*cfg.source};
  return xi_samples(xi_mesh);
}

TrainingSet build_training_set(const RunConfig& cfg, const Domain& domain, const MeshSet& meshes, double s) {
  const auto xis = source_points(cfg, meshes.xi);
  for (const Point2 xi : xis)
    if (!domain.contains_interior(xi)) throw Error(ErrorKind::invalid_argument, "source point outside the domain");
  SamplingConfig sc = cfg.sampling;
  sc.s = s;
  TrainingSet t;
  t.partition = make_partition(domain, cfg.m, cfg.n, xis);
  t.blocks = assemble_block_datasets(t.partition, xis, meshes.x, sc);
  return t;
}

DiskVariant train_disk_variant(const RunConfig& cfg, const MeshSet& meshes) {
  if (cfg.domain != DomainKind::disk || cfg.domain_params.radius != 1.0 || !cfg.source ||
      !(*cfg.source == Point2{0.0, 0.0}))
    throw Error(ErrorKind::invalid_argument, "needs the unit disk with a single source at the origin");
  const Domain domain = make_domain(cfg);
  const ProblemSpec problem = make_problem(cfg);
  const TrainingSet set = build_training_set(cfg, domain, meshes, cfg.sampling.s);
  TrainAllResult res =
      train_all(set.blocks, problem, set.partition, cfg.sampling.s, cfg.network, cfg.training, cfg.weights, 1);
  DiskVariant out;
  out.report = res.reports.front();
  if (out.report.failed) throw Error(ErrorKind::training_failure, "training failed: " + out.report.error);
  out.model = std::move(res.model);
  const GFNetParams& net = out.model.blocks.begin()->second;
  out.green_error = green_error_disk([&](Point2 x) { return forward(net, x, {0.0, 0.0}); }, cfg.sampling.s);
  out.asymmetry = asymmetry_measure(net, disk_probe_pairs(cfg.sampling.s));
  return out;
}

}  // namespace gfnet
