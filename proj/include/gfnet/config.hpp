#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gfnet/geometry.hpp"
#include "gfnet/loss.hpp"
#include "gfnet/sampling.hpp"
#include "gfnet/training.hpp"

namespace gfnet {

/// Everything one CLI run needs. Loaded from an INI file:
///
///   [problem]    name, a, r    (a and r override the built-in coefficients)
///   [domain]     kind, half_width, radius, inner_radius
///   [sampling]   s, c1, c2, h1, h2, h3, xi_h, source (optional "x1 x2": one fixed source point)
///   [partition]  m, n
///   [network]    depth, width, activation, placement
///   [training]   adam_max_steps, adam_lr, eps1, lbfgs_max_steps, eps2, lbfgs_memory,
///                wolfe_c1, wolfe_c2, lambda_b, lambda_s, history_every
///   [quadrature] h            (one or more spacings, space separated)
///   [run]        out, workers, seed
struct RunConfig {
  std::string problem = "case2";
  std::optional<std::string> a_field, r_field;
  DomainKind domain = DomainKind::square;
  DomainParams domain_params;
  SamplingConfig sampling;
  double xi_h = 0.2;
  std::optional<Point2> source;
  int m = 1, n = 1;
  NetworkSpec network;
  TrainConfig training;
  LossWeights weights;
  std::vector<double> quad_h{0.2};
  std::filesystem::path out = "gfnet_out";
  int workers = 1;

  /// Throws Error(invalid_argument) naming the offending field.
  void validate() const;
};

/// Throws Error(parse_failure) or Error(unknown_name) naming the offending
/// `section.key`, then validates.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

}  // namespace gfnet
