#include "gfnet/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gfnet/error.hpp"
#include "gfnet/pde.hpp"
#include "gfnet/text_io.hpp"

namespace gfnet {

namespace pt = boost::property_tree;

void RunConfig::validate() const {
  auto bad = [](const std::string& field, const std::string& why) {
    throw Error(ErrorKind::invalid_argument, "config field '" + field + "': " + why);
  };
  try {
    sampling.validate();
  } catch (const Error& e) {
    bad("sampling", e.what());
  }
  if (!(xi_h > 0.0)) bad("sampling.xi_h", "must be positive");
  if (m < 1) bad("partition.m", "must be at least 1");
  if (n < 1) bad("partition.n", "must be at least 1");
  if (network.depth < 2) bad("network.depth", "must be at least 2");
  if (network.width < 1) bad("network.width", "must be at least 1");
  try {
    training.validate();
  } catch (const Error& e) {
    bad("training", e.what());
  }
  if (!(weights.lambda_b >= 0.0)) bad("training.lambda_b", "must be non-negative");
  if (!(weights.lambda_s >= 0.0)) bad("training.lambda_s", "must be non-negative");
  if (quad_h.empty()) bad("quadrature.h", "needs at least one spacing");
  for (double h : quad_h)
    if (!(h > 0.0)) bad("quadrature.h", "spacings must be positive");
  if (workers < 1) bad("run.workers", "must be at least 1");
  try {
    make_domain(domain, domain_params);
  } catch (const Error& e) {
    bad("domain", e.what());
  }
}

namespace {

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  template <class Fn>
  void with(const std::string& key, Fn&& fn) {
    seen_.insert(key);
    const auto value = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!value) return;
    try {
      fn(trim(*value));
    } catch (const Error& e) {
      throw Error(e.kind(), "config field '" + key + "': " + strip_kind(e.what()));
    }
  }

  void real(const std::string& key, double& out) {
    with(key, [&](const std::string& v) { out = parse_double(v); });
  }
  void integer(const std::string& key, int& out) {
    with(key, [&](const std::string& v) { out = static_cast<int>(parse_long(v)); });
  }

  /// Rejects sections and keys nobody asked for.
  void check_unknown() const {
    for (const auto& [section, body] : tree_) {
      if (body.empty()) throw Error(ErrorKind::parse_failure, "config field '" + section + "': key outside a section");
      for (const auto& [key, _] : body) {
        const std::string full = section + "." + key;
        if (!seen_.contains(full)) throw Error(ErrorKind::unknown_name, "config field '" + full + "': unknown key");
      }
    }
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
  }
  static std::string strip_kind(const std::string& what) {
    const auto p = what.find(": ");
    return p == std::string::npos ? what : what.substr(p + 2);
  }

  const pt::ptree& tree_;
  std::set<std::string> seen_;
};

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

RunConfig from_tree(const pt::ptree& tree) {
  RunConfig c;
  Reader r(tree);
  r.with("problem.name", [&](const std::string& v) {
    const auto names = builtin_problem_names();
    if (std::find(names.begin(), names.end(), v) == names.end())
      throw Error(ErrorKind::unknown_name, "unknown problem '" + v + "'");
    c.problem = v;
  });
  r.with("problem.a", [&](const std::string& v) {
    parse_field(v);
    c.a_field = v;
  });
  r.with("problem.r", [&](const std::string& v) {
    parse_field(v);
    c.r_field = v;
  });
  r.with("domain.kind", [&](const std::string& v) { c.domain = parse_domain_kind(v); });
  r.real("domain.half_width", c.domain_params.half_width);
  r.real("domain.radius", c.domain_params.radius);
  r.real("domain.inner_radius", c.domain_params.inner_radius);
  r.real("sampling.s", c.sampling.s);
  r.real("sampling.c1", c.sampling.c1);
  r.real("sampling.c2", c.sampling.c2);
  r.real("sampling.h1", c.sampling.h1);
  r.real("sampling.h2", c.sampling.h2);
  r.real("sampling.h3", c.sampling.h3);
  r.real("sampling.xi_h", c.xi_h);
  r.with("sampling.source", [&](const std::string& v) {
    const auto w = words(v);
    if (w.size() != 2) throw Error(ErrorKind::parse_failure, "expected two coordinates");
    c.source = Point2{parse_double(w[0]), parse_double(w[1])};
  });
  r.integer("partition.m", c.m);
  r.integer("partition.n", c.n);
  r.integer("network.depth", c.network.depth);
  r.integer("network.width", c.network.width);
  r.with("network.activation", [&](const std::string& v) { c.network.activation = parse_activation(v); });
  r.with("network.placement", [&](const std::string& v) { c.network.placement = parse_placement(v); });
  r.integer("training.adam_max_steps", c.training.adam_max_steps);
  r.real("training.adam_lr", c.training.adam_lr);
  r.real("training.eps1", c.training.eps1);
  r.integer("training.lbfgs_max_steps", c.training.lbfgs_max_steps);
  r.real("training.eps2", c.training.eps2);
  r.integer("training.lbfgs_memory", c.training.lbfgs_memory);
  r.real("training.wolfe_c1", c.training.wolfe_c1);
  r.real("training.wolfe_c2", c.training.wolfe_c2);
  r.real("training.lambda_b", c.weights.lambda_b);
  r.real("training.lambda_s", c.weights.lambda_s);
  r.integer("training.history_every", c.training.history_every);
  r.with("quadrature.h", [&](const std::string& v) {
    c.quad_h.clear();
    for (const auto& w : words(v)) c.quad_h.push_back(parse_double(w));
  });
  r.with("run.out", [&](const std::string& v) { c.out = v; });
  r.integer("run.workers", c.workers);
  r.with("run.seed", [&](const std::string& v) {
    const long seed = parse_long(v);
    if (seed < 0) throw Error(ErrorKind::parse_failure, "seed must be non-negative");
    c.training.seed = static_cast<std::uint64_t>(seed);
  });
  r.check_unknown();
  c.validate();
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::parse_failure, std::string("config: ") + e.what());
  }
  return from_tree(tree);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_failure, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace gfnet
