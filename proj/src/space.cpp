#include "quadmet/space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "quadmet/error.hpp"

namespace quadmet {

namespace {

std::string pair_text(const std::vector<std::string>& labels, std::size_t i, std::size_t j) {
  return "(" + labels[i] + "," + labels[j] + ")";
}

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Uniform helpers over std::mt19937_64; the raw engine is fully specified
// by the standard, so generated spaces are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace

Space::Space(std::vector<std::string> labels, std::vector<double> dist_row_major)
    : n_(labels.size()), labels_(std::move(labels)), dist_(std::move(dist_row_major)) {
  if (n_ == 0) fail(Errc::InvalidArgument, "a space needs at least one point");
  if (dist_.size() != n_ * n_)
    fail(Errc::InvalidArgument, "distance matrix must be " + std::to_string(n_) + "x" +
                                    std::to_string(n_) + " to match the labels");
  {
    std::set<std::string> seen;
    for (const auto& l : labels_)
      if (!seen.insert(l).second)
        fail(Errc::InvalidArgument, "duplicate label '" + l + "'");
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      double d = (*this)(i, j);
      if (!std::isfinite(d))
        fail(Errc::InvalidArgument, "non-finite entry at " + pair_text(labels_, i, j));
      if (d < 0.0)
        fail(Errc::NegativeEntry, "distances must be nonnegative; entry at " +
                                      pair_text(labels_, i, j) + " is " + fmt(d));
    }
  for (std::size_t i = 0; i < n_; ++i)
    if ((*this)(i, i) != 0.0)
      fail(Errc::NonzeroDiagonal, "identity axiom d(x,x)=0 violated at (" + labels_[i] +
                                      "," + labels_[i] + "): " + fmt((*this)(i, i)));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i))
        fail(Errc::NonSymmetric, "symmetry axiom d(x,y)=d(y,x) violated at " +
                                     pair_text(labels_, i, j) + ": " + fmt((*this)(i, j)) +
                                     " vs " + fmt((*this)(j, i)));
      if ((*this)(i, j) <= 0.0)
        fail(Errc::NonpositiveOffDiagonal,
             "distinct points need positive distance; entry at " + pair_text(labels_, i, j) +
                 " is " + fmt((*this)(i, j)));
    }
}

Space Space::from_matrix(const std::vector<std::vector<double>>& dist) {
  std::size_t n = dist.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : dist) {
    if (row.size() != n) fail(Errc::InvalidArgument, "distance matrix must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Space(std::move(labels), std::move(flat));
}

double Space::diameter() const {
  double d = 0.0;
  for (double x : dist_) d = std::max(d, x);
  return d;
}

bool is_metric(const Space& s, Tol tol) {
  std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (!tol.leq(s(x, y), s(x, z) + s(z, y))) return false;
  return true;
}

bool is_ultrametric(const Space& s, Tol tol) {
  std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (!tol.leq(s(x, y), std::max(s(x, z), s(z, y)))) return false;
  return true;
}

namespace {

double lp_distance(const std::vector<double>& a, const std::vector<double>& b, double p) {
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
  }
  if (p == 2.0) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::fabs(a[i] - b[i]), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

Space from_points_lp(const std::vector<std::vector<double>>& points, double p) {
  if (points.empty()) fail(Errc::InvalidArgument, "no points given");
  if (!(p >= 1.0)) fail(Errc::InvalidArgument, "lp exponent must satisfy p >= 1");
  std::size_t n = points.size(), dim = points[0].size();
  for (const auto& pt : points)
    if (pt.size() != dim) fail(Errc::InvalidArgument, "points must have equal dimensions");
  std::vector<double> dist(n * n, 0.0);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = lp_distance(points[i], points[j], p);
      if (d == 0.0)
        fail(Errc::DuplicatePoint, "points " + std::to_string(i) + " and " +
                                       std::to_string(j) + " coincide");
      dist[i * n + j] = dist[j * n + i] = d;
    }
  return Space(std::move(labels), std::move(dist));
}

Space tree_metric(std::size_t n_vertices, const std::vector<TreeEdge>& edges, bool leaves_only) {
  if (n_vertices == 0) fail(Errc::InvalidArgument, "tree needs at least one vertex");
  if (edges.size() != n_vertices - 1)
    fail(Errc::NotATree, "a tree on " + std::to_string(n_vertices) + " vertices has " +
                             std::to_string(n_vertices - 1) + " edges, got " +
                             std::to_string(edges.size()));
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n_vertices);
  for (const auto& e : edges) {
    if (e.u >= n_vertices || e.v >= n_vertices)
      fail(Errc::InvalidArgument, "edge endpoint out of range");
    if (!(e.weight > 0.0)) fail(Errc::NotATree, "edge weights must be positive");
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  // n-1 edges + connected == tree
  std::vector<double> dist(n_vertices * n_vertices, -1.0);
  for (std::size_t root = 0; root < n_vertices; ++root) {
    std::queue<std::size_t> q;
    dist[root * n_vertices + root] = 0.0;
    q.push(root);
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop();
      for (auto [v, w] : adj[u])
        if (dist[root * n_vertices + v] < 0.0) {
          dist[root * n_vertices + v] = dist[root * n_vertices + u] + w;
          q.push(v);
        }
    }
  }
  for (double d : dist)
    if (d < 0.0) fail(Errc::NotATree, "graph is not connected");

  std::vector<std::size_t> keep;
  if (leaves_only && n_vertices > 1) {
    for (std::size_t v = 0; v < n_vertices; ++v)
      if (adj[v].size() == 1) keep.push_back(v);
  } else {
    for (std::size_t v = 0; v < n_vertices; ++v) keep.push_back(v);
  }
  std::size_t m = keep.size();
  std::vector<std::string> labels;
  std::vector<double> sub(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) labels.push_back("v" + std::to_string(keep[i]));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      sub[i * m + j] = dist[keep[i] * n_vertices + keep[j]];
  return Space(std::move(labels), std::move(sub));
}

Space gen_random_metric(std::size_t n, std::uint64_t seed) {
  if (n < 2) fail(Errc::InvalidArgument, "random metric needs n >= 2");
  Rng rng(seed);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = rng.uniform(0.3, 3.0);
  // Shortest-path closure, iterated to a fixed point so the triangle
  // inequality holds exactly in double arithmetic.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double via = d[i * n + k] + d[k * n + j];
          if (i != j && via < d[i * n + j]) {
            d[i * n + j] = via;
            changed = true;
          }
        }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return Space(std::move(labels), std::move(d));
}

Space gen_random_ultrametric(std::size_t n, std::uint64_t seed) {
  if (n < 2) fail(Errc::InvalidArgument, "random ultrametric needs n >= 2");
  Rng rng(seed);
  std::vector<double> d(n * n, 0.0);
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  double height = 0.0;
  while (clusters.size() > 1) {
    height += rng.uniform(0.2, 1.0);  // strictly increasing merge heights
    std::size_t a = rng.below(clusters.size());
    std::size_t b = rng.below(clusters.size() - 1);
    if (b >= a) ++b;
    for (std::size_t i : clusters[a])
      for (std::size_t j : clusters[b]) d[i * n + j] = d[j * n + i] = height;
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return Space(std::move(labels), std::move(d));
}

Space gen_random_semimetric(std::size_t n, std::uint64_t seed) {
  if (n < 2) fail(Errc::InvalidArgument, "random semimetric needs n >= 2");
  Rng rng(seed);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = rng.uniform(0.2, 3.0);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return Space(std::move(labels), std::move(d));
}

Space gen_random_tree_metric(std::size_t n, std::uint64_t seed, bool leaves_only) {
  if (n < 2) fail(Errc::InvalidArgument, "random tree needs n >= 2");
  Rng rng(seed);
  std::vector<TreeEdge> edges;
  for (std::size_t v = 1; v < n; ++v)
    edges.push_back({rng.below(v), v, rng.uniform(0.5, 2.0)});
  return tree_metric(n, edges, leaves_only);
}

Space gen_random_lp_space(std::size_t n, std::size_t dim, double p, std::uint64_t seed,
                          double min_separation) {
  if (n < 2 || dim == 0) fail(Errc::InvalidArgument, "need n >= 2 points and dim >= 1");
  Rng rng(seed);
  std::vector<std::vector<double>> pts;
  std::size_t attempts = 0;
  while (pts.size() < n) {
    if (++attempts > 100000)
      fail(Errc::InvalidArgument, "cannot place points with the requested separation");
    std::vector<double> cand(dim);
    for (auto& c : cand) c = rng.unit();
    bool ok = true;
    for (const auto& q : pts)
      if (lp_distance(cand, q, p) < min_separation) {
        ok = false;
        break;
      }
    if (ok) pts.push_back(std::move(cand));
  }
  return from_points_lp(pts, p);
}

Space snowflake(const Space& s, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    fail(Errc::AlphaOutOfRange, "snowflake exponent must lie in (0,1], got " + fmt(alpha));
  if (alpha == 1.0) return s;
  std::vector<double> d = s.matrix();
  for (auto& x : d) x = x == 0.0 ? 0.0 : std::pow(x, alpha);
  return Space(s.labels(), std::move(d));
}

Space scale(const Space& s, double lambda) {
  if (!(lambda > 0.0)) fail(Errc::NonpositiveScale, "scale factor must be positive, got " + fmt(lambda));
  std::vector<double> d = s.matrix();
  for (auto& x : d) x *= lambda;
  return Space(s.labels(), std::move(d));
}

Space relabel(const Space& s, const std::vector<std::size_t>& perm) {
  std::size_t n = s.size();
  if (perm.size() != n) fail(Errc::InvalidArgument, "permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t v : perm) {
    if (v >= n || seen[v]) fail(Errc::InvalidArgument, "not a permutation");
    seen[v] = true;
  }
  std::vector<std::string> labels(n);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) labels[perm[i]] = s.label(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[perm[i] * n + perm[j]] = s(i, j);
  return Space(std::move(labels), std::move(d));
}

// ---------------------------------------------------------------------------
// Wire formats

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& cell, double& out) {
  std::string t = trim(cell);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;  // from_chars does not accept a leading '+'
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

Space space_from_csv(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
      if (!trim(line).empty()) lines.push_back(line);
  }
  if (lines.empty()) fail(Errc::ParseError, "empty CSV input");
  auto first = split_csv_line(lines[0]);
  std::size_t n = first.size();
  double probe = 0.0;
  bool has_header = false;
  for (const auto& cell : first)
    if (!parse_number(cell, probe)) {
      has_header = true;
      break;
    }
  std::size_t matrix_start = has_header ? 1 : 0;
  if (lines.size() - matrix_start != n)
    fail(Errc::ParseError, "expected " + std::to_string(n) + " matrix rows, got " +
                               std::to_string(lines.size() - matrix_start));
  std::vector<std::string> labels;
  if (has_header) {
    for (const auto& cell : first) labels.push_back(trim(cell));
  } else {
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  }
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    auto cells = split_csv_line(lines[matrix_start + r]);
    if (cells.size() != n)
      fail(Errc::ParseError, "ragged CSV row " + std::to_string(matrix_start + r + 1) +
                                 ": expected " + std::to_string(n) + " cells, got " +
                                 std::to_string(cells.size()));
    for (std::size_t c = 0; c < n; ++c) {
      if (!parse_number(cells[c], dist[r * n + c]))
        fail(Errc::ParseError, "bad number '" + trim(cells[c]) + "' at row " +
                                   std::to_string(matrix_start + r + 1) + ", column " +
                                   std::to_string(c + 1));
    }
  }
  return Space(std::move(labels), std::move(dist));
}

std::string space_to_csv(const Space& s, bool with_header) {
  std::string out;
  std::size_t n = s.size();
  if (with_header) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ',';
      out += s.label(i);
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out += ',';
      out += fmt(s(i, j));
    }
    out += '\n';
  }
  return out;
}

Space space_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::ParseError, "invalid JSON");
  if (!j.is_object() || !j.contains("labels") || !j.contains("matrix"))
    fail(Errc::ParseError, "space JSON needs \"labels\" and \"matrix\"");
  std::vector<std::string> labels;
  for (const auto& l : j["labels"]) {
    if (!l.is_string()) fail(Errc::ParseError, "labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  std::size_t n = labels.size();
  const auto& m = j["matrix"];
  if (!m.is_array() || m.size() != n) fail(Errc::ParseError, "matrix must have one row per label");
  std::vector<double> dist;
  dist.reserve(n * n);
  for (const auto& row : m) {
    if (!row.is_array() || row.size() != n)
      fail(Errc::ParseError, "matrix rows must have one entry per label");
    for (const auto& x : row) {
      if (!x.is_number()) fail(Errc::ParseError, "matrix entries must be numbers");
      dist.push_back(x.get<double>());
    }
  }
  return Space(std::move(labels), std::move(dist));
}

std::string space_to_json(const Space& s) {
  nlohmann::json j;
  j["labels"] = s.labels();
  std::size_t n = s.size();
  nlohmann::json m = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < n; ++k) row.push_back(s(i, k));
    m.push_back(std::move(row));
  }
  j["matrix"] = std::move(m);
  return j.dump();
}

}  // namespace quadmet
