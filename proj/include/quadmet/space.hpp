#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "quadmet/tolerance.hpp"

namespace quadmet {

// A finite semimetric space: labeled points plus a symmetric distance matrix
// with zero diagonal and strictly positive off-diagonal entries. Instances
// are immutable after construction and safe to share across threads.
class Space {
 public:
  Space(std::vector<std::string> labels, std::vector<double> dist_row_major);

  // Points are labeled p0, p1, ...
  static Space from_matrix(const std::vector<std::vector<double>>& dist);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<double>& matrix() const { return dist_; }
  double diameter() const;

 private:
  std::size_t n_;
  std::vector<std::string> labels_;
  std::vector<double> dist_;
};

// Triangle inequality on all ordered triples.
bool is_metric(const Space& s, Tol tol = {});
// Strong triangle inequality d(x,y) <= max{d(x,z), d(z,y)} on all triples.
bool is_ultrametric(const Space& s, Tol tol = {});

// Pairwise lp distances of the given points (p >= 1, equal dimensions,
// pairwise distinct points).
Space from_points_lp(const std::vector<std::vector<double>>& points, double p);

struct TreeEdge {
  std::size_t u = 0, v = 0;
  double weight = 1.0;
};

// Path-length metric of a positively weighted tree, on all vertices or on
// the leaves only.
Space tree_metric(std::size_t n_vertices, const std::vector<TreeEdge>& edges,
                  bool leaves_only = false);

// Seed-deterministic generators.
Space gen_random_metric(std::size_t n, std::uint64_t seed);       // shortest-path closure
Space gen_random_ultrametric(std::size_t n, std::uint64_t seed);  // hierarchical merge heights
Space gen_random_semimetric(std::size_t n, std::uint64_t seed);   // no triangle inequality
Space gen_random_tree_metric(std::size_t n, std::uint64_t seed, bool leaves_only = false);
// Random points in [0,1]^dim, rejection-sampled so that no two points come
// closer than min_separation.
Space gen_random_lp_space(std::size_t n, std::size_t dim, double p, std::uint64_t seed,
                          double min_separation = 0.02);

Space snowflake(const Space& s, double alpha);  // entrywise d^alpha, 0 < alpha <= 1
Space scale(const Space& s, double lambda);     // entrywise lambda*d, lambda > 0
// Point i of the input becomes point perm[i] of the output.
Space relabel(const Space& s, const std::vector<std::size_t>& perm);

// Wire formats. CSV: n x n numeric matrix with an optional leading label
// row; ragged rows are rejected. JSON: {"labels": [...], "matrix": [[...]]};
// round-trips are lossless.
Space space_from_csv(const std::string& text);
std::string space_to_csv(const Space& s, bool with_header = true);
Space space_from_json(const std::string& text);
std::string space_to_json(const Space& s);

}  // namespace quadmet
