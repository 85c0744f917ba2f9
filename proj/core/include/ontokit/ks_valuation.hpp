#pragma once

// Kochen-Specker valuation problem on exact vector sets.
//
// A valuation assigns 0/1 to every ray such that each complete orthogonal
// basis holds exactly one 1 and no orthogonal pair is jointly 1. Orthogonal
// sets smaller than the dimension only carry the pairwise constraint.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ontokit/exact.hpp"

namespace ontokit {

class VectorSetError : public std::runtime_error {
 public:
  VectorSetError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct ExactRay {
  std::vector<Surd> entries;
  std::string label;
  int source_line = 0;
};

struct VectorSet {
  int dim = 0;
  std::int64_t radicand = 0;
  std::vector<ExactRay> rays;
};

/// Text format: a header `dim=<d> radical=<r>`, then one ray per line as d
/// exact scalars, optionally prefixed by `label:`. `#` starts a comment.
VectorSet parse_vector_set(const std::string& text);
VectorSet load_vector_set(const std::filesystem::path& path);
std::string format_vector_set(const VectorSet& set);

Surd exact_dot(const ExactRay& a, const ExactRay& b);
bool exactly_parallel(const ExactRay& a, const ExactRay& b);

struct OrthogonalityGraph {
  int n = 0;
  int dim = 0;
  std::vector<std::pair<int, int>> edges;   // i < j, sorted
  std::vector<std::vector<int>> adjacency;  // sorted neighbor lists
  std::vector<std::vector<int>> bases;      // complete orthogonal d-sets, sorted
  /// All maximal orthogonal sets, complete or not.
  std::vector<std::vector<int>> maximal_orthogonal_sets;

  static OrthogonalityGraph from_edges(int n, int dim, std::vector<std::pair<int, int>> edges);
  bool adjacent(int i, int j) const;
  OrthogonalityGraph without_vertex(int v) const;
  OrthogonalityGraph induced(const std::vector<int>& keep) const;
};

OrthogonalityGraph build_graph(const VectorSet& set);

using Valuation = std::vector<std::uint8_t>;

struct SearchStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t solutions = 0;
  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct ValuationResult {
  bool satisfiable = false;
  std::optional<Valuation> valuation;  // first one found
  std::vector<Valuation> all;          // filled in enumerate mode
  SearchStats stats;
};

struct SearchOptions {
  bool enumerate_all = false;
  /// Stop enumerating after this many solutions (0 = unlimited).
  std::uint64_t max_solutions = 0;
  /// Keep the solutions themselves (not just the count) when enumerating.
  bool keep_solutions = true;
};

/// Exhaustive backtracking, degree-descending branching order, with unit
/// propagation on bases and zero-propagation to orthogonal neighbours.
ValuationResult find_valuation(const OrthogonalityGraph& graph, const SearchOptions& opts = {});

struct ValuationCheck {
  bool ok = true;
  std::string violation;
};

/// Re-checks conditions (i)-(iii) directly against the graph.
ValuationCheck verify_valuation(const OrthogonalityGraph& graph, const Valuation& v);

}  // namespace ontokit
