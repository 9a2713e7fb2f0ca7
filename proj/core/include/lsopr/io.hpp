#pragma once

#include <string>

#include "lsopr/apps.hpp"
#include "lsopr/bounds.hpp"
#include "lsopr/colgen.hpp"

namespace lsopr {

/// On-disk problem description: either a full instance (objective, rows,
/// domain) or a matrix-completion observation set driving the level-search
/// solver.
struct ProblemFile {
  bool is_mc = false;
  Instance instance;     // valid when !is_mc
  McData mc;             // valid when is_mc
  double mc_delta_lb = 1e-4;
};

std::string instance_to_json(const Instance& instance);
std::string mc_to_json(const McData& data, double delta_lb);

ProblemFile problem_from_json(const std::string& text);

struct Report {
  double objective = 0.0;
  double dual_bound = 0.0;
  double gap = 0.0;
  int rank = 0;
  int reduced_rank = 0;
  int bound_theoretical = 0;
  int mtilde = 0;
  int iterations = 0;
  int columns_generated = 0;
  std::optional<int> branch;
  double wall_time_ms = 0.0;
  Vector eigenvalues;
  Matrix x;
  int n = 0, p = 0, m = 0, k = 0;
  std::string status = "optimal";
};

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
std::string report_to_csv(const Report& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lsopr
