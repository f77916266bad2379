#include "gfnet/model.hpp"

#include <fstream>
#include <sstream>

#include "gfnet/error.hpp"
#include "gfnet/text_io.hpp"

namespace gfnet {

const GFNetParams& GreensModel::network_for(Point2 p) const {
  const int k = partition.block_of(p);
  auto it = blocks.find(k);
  if (it == blocks.end())
    throw Error(ErrorKind::unoccupied_block, "no trained network for block " + std::to_string(k));
  return it->second;
}

double GreensModel::value(Point2 x, Point2 xi) const { return forward(network_for(xi), x, xi); }

void write_network(std::ostream& out, const NetworkFile& f) {
  const GFNetParams& p = f.params;
  out << "GFNET 1\n";
  out << "activation " << to_string(p.activation()) << '\n';
  out << "placement " << to_string(p.placement()) << '\n';
  out << "depth " << p.depth() << " width " << p.width() << '\n';
  out << "s " << format_double(f.s) << '\n';
  out << "block " << f.block << '\n';
  out << "rect " << format_double(f.rect.x1_min) << ' ' << format_double(f.rect.x1_max) << ' '
      << format_double(f.rect.x2_min) << ' ' << format_double(f.rect.x2_max) << '\n';
  for (int k = 1; k <= p.depth(); ++k) {
    const auto w = p.weight(k);
    out << "layer " << k << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) out << (j ? " " : "") << format_double(w(i, j));
      out << '\n';
    }
    out << "bias";
    const auto b = p.bias(k);
    for (Eigen::Index i = 0; i < b.size(); ++i) out << ' ' << format_double(b(i));
    out << '\n';
  }
}

NetworkFile read_network(std::istream& in) {
  TokenReader r(in);
  r.expect("GFNET");
  r.expect("1");
  r.expect("activation");
  const Activation act = parse_activation(r.word("activation name"));
  r.expect("placement");
  const ActivationPlacement pl = parse_placement(r.word("placement name"));
  r.expect("depth");
  const long depth = r.integer("depth");
  r.expect("width");
  const long width = r.integer("width");
  if (depth < 1 || width < 1 || depth > 1000 || width > 100000)
    throw Error(ErrorKind::parse_failure, "implausible network size");
  NetworkFile f;
  f.params = GFNetParams(static_cast<int>(depth), static_cast<int>(width), act, pl);
  r.expect("s");
  f.s = r.real("s");
  r.expect("block");
  f.block = static_cast<int>(r.integer("block index"));
  r.expect("rect");
  f.rect.x1_min = r.real("rect");
  f.rect.x1_max = r.real("rect");
  f.rect.x2_min = r.real("rect");
  f.rect.x2_max = r.real("rect");
  for (int k = 1; k <= f.params.depth(); ++k) {
    r.expect("layer");
    if (r.integer("layer index") != k) throw Error(ErrorKind::parse_failure, "layers out of order");
    auto w = f.params.weight(k);
    if (r.integer("rows") != w.rows() || r.integer("cols") != w.cols())
      throw Error(ErrorKind::parse_failure, "layer " + std::to_string(k) + " has the wrong shape");
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = r.real("weight");
    r.expect("bias");
    auto b = f.params.bias(k);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = r.real("bias");
  }
  return f;
}

namespace {

std::string block_file(int k) { return "block_" + std::to_string(k) + ".gfnet"; }

}  // namespace

// manifest.gfm:
//   GFMODEL 1
//   domain <kind> <half_width> <radius> <inner_radius>
//   s <s>
//   partition <m> <n> <x1_min> <x1_max> <x2_min> <x2_max>
//   occupied <count> <k...>
//   partial <0|1>
//   blocks <count> <k...>
//   lineage <count>, then one line each
void save_model(const std::filesystem::path& dir, const GreensModel& model) {
  std::filesystem::create_directories(dir);
  const DomainParams& dp = model.domain.params();
  const Rect& bb = model.partition.bbox;
  std::ostringstream m;
  m << "GFMODEL 1\n";
  m << "domain " << to_string(model.domain.kind()) << ' ' << format_double(dp.half_width) << ' '
    << format_double(dp.radius) << ' ' << format_double(dp.inner_radius) << '\n';
  m << "s " << format_double(model.s) << '\n';
  m << "partition " << model.partition.m << ' ' << model.partition.n << ' ' << format_double(bb.x1_min) << ' '
    << format_double(bb.x1_max) << ' ' << format_double(bb.x2_min) << ' ' << format_double(bb.x2_max) << '\n';
  m << "occupied " << model.partition.occupied.size();
  for (int k : model.partition.occupied) m << ' ' << k;
  m << "\npartial " << (model.partial ? 1 : 0) << '\n';
  m << "blocks " << model.blocks.size();
  for (const auto& [k, _] : model.blocks) m << ' ' << k;
  m << "\nlineage " << model.lineage.size() << '\n';
  for (const auto& line : model.lineage) m << line << '\n';

  std::ofstream out(dir / "manifest.gfm", std::ios::binary);
  if (!out) throw Error(ErrorKind::io_failure, "cannot write " + (dir / "manifest.gfm").string());
  out << m.str();
  for (const auto& [k, params] : model.blocks) {
    std::ofstream f(dir / block_file(k), std::ios::binary);
    if (!f) throw Error(ErrorKind::io_failure, "cannot write " + (dir / block_file(k)).string());
    write_network(f, {params, model.s, k, model.partition.block_rect(k)});
  }
}

GreensModel load_model(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.gfm", std::ios::binary);
  if (!in) throw Error(ErrorKind::io_failure, "cannot open " + (dir / "manifest.gfm").string());
  TokenReader r(in);
  GreensModel model;
  r.expect("GFMODEL");
  r.expect("1");
  r.expect("domain");
  const DomainKind kind = parse_domain_kind(r.word("domain kind"));
  DomainParams dp;
  dp.half_width = r.real("half width");
  dp.radius = r.real("radius");
  dp.inner_radius = r.real("inner radius");
  model.domain = make_domain(kind, dp);
  r.expect("s");
  model.s = r.real("s");
  r.expect("partition");
  model.partition.m = static_cast<int>(r.integer("m"));
  model.partition.n = static_cast<int>(r.integer("n"));
  model.partition.bbox.x1_min = r.real("bbox");
  model.partition.bbox.x1_max = r.real("bbox");
  model.partition.bbox.x2_min = r.real("bbox");
  model.partition.bbox.x2_max = r.real("bbox");
  r.expect("occupied");
  for (long c = r.integer("count"); c > 0; --c) model.partition.occupied.push_back(static_cast<int>(r.integer("block")));
  r.expect("partial");
  model.partial = r.integer("partial flag") != 0;
  r.expect("blocks");
  std::vector<int> ids;
  for (long c = r.integer("count"); c > 0; --c) ids.push_back(static_cast<int>(r.integer("block")));
  r.expect("lineage");
  long lines = r.integer("lineage count");
  std::string line;
  std::getline(in, line);
  for (; lines > 0; --lines) {
    if (!std::getline(in, line)) throw Error(ErrorKind::parse_failure, "truncated lineage");
    model.lineage.push_back(line);
  }
  for (int k : ids) {
    std::ifstream f(dir / block_file(k), std::ios::binary);
    if (!f) throw Error(ErrorKind::io_failure, "cannot open " + (dir / block_file(k)).string());
    NetworkFile nf = read_network(f);
    if (nf.block != k) throw Error(ErrorKind::parse_failure, block_file(k) + " holds block " + std::to_string(nf.block));
    model.blocks.emplace(k, std::move(nf.params));
  }
  return model;
}

}  // namespace gfnet
