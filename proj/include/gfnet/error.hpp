#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gfnet {

enum class ErrorKind {
  invalid_geometry,
  meshing_failure,
  degenerate_triangle,
  zero_length_edge,
  empty_sample_set,
  degenerate_sampling,
  empty_partition,
  unknown_name,
  singular_point,
  unoccupied_block,
  zero_denominator,
  parse_failure,
  domain_mismatch,
  cg_nonconvergence,
  invalid_argument,
  io_failure,
  training_failure,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gfnet
