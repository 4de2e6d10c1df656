#include "knde/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace knde {

namespace {

constexpr Index kLeafSize = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

KdTree::KdTree(PointMatrix points) {
  if (points.rows() < 1)
    throw std::invalid_argument("cannot index an empty sample set");
  if (points.cols() < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!points.allFinite())
    throw std::invalid_argument("sample coordinates must be finite");

  const Index n = points.rows();
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});

  if (points.cols() == 1) {
    std::sort(perm.begin(), perm.end(),
              [&](Index a, Index b) { return points(a, 0) < points(b, 0); });
  } else {
    nodes_.reserve(static_cast<std::size_t>(2 * n / kLeafSize + 2));
    build_node(perm, points, 0, n);
  }

  pts_.resize(n, points.cols());
  for (Index i = 0; i < n; ++i) pts_.row(i) = points.row(perm[i]);
}

Index KdTree::build_node(std::vector<Index>& perm, const PointMatrix& src,
                         Index begin, Index end) {
  const int d = static_cast<int>(src.cols());
  Index id = static_cast<Index>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1});
  box_lo_.resize(box_lo_.size() + d, kInf);
  box_hi_.resize(box_hi_.size() + d, -kInf);

  double* lo = box_lo_.data() + id * d;
  double* hi = box_hi_.data() + id * d;
  for (Index i = begin; i < end; ++i) {
    for (int j = 0; j < d; ++j) {
      double v = src(perm[i], j);
      lo[j] = std::min(lo[j], v);
      hi[j] = std::max(hi[j], v);
    }
  }

  int axis = 0;
  double extent = -1.0;
  for (int j = 0; j < d; ++j) {
    if (hi[j] - lo[j] > extent) {
      extent = hi[j] - lo[j];
      axis = j;
    }
  }
  // Leaf on small ranges or fully coincident points.
  if (end - begin <= kLeafSize || extent <= 0.0) return id;

  Index mid = begin + (end - begin) / 2;
  std::nth_element(perm.begin() + begin, perm.begin() + mid,
                   perm.begin() + end, [&](Index a, Index b) {
                     return src(a, axis) < src(b, axis);
                   });
  Index left = build_node(perm, src, begin, mid);
  Index right = build_node(perm, src, mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::min_sq_to_node(Index node,
                              const Eigen::Ref<const Vector>& x) const {
  const int d = dim();
  const double* lo = box_lo_.data() + node * d;
  const double* hi = box_hi_.data() + node * d;
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    double e = 0.0;
    if (x(j) < lo[j])
      e = lo[j] - x(j);
    else if (x(j) > hi[j])
      e = x(j) - hi[j];
    s += e * e;
  }
  return s;
}

void KdTree::check_query(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != pts_.cols())
    throw std::invalid_argument("query point dimension mismatch");
}

double KdTree::kth_distance(const Eigen::Ref<const Vector>& x, Index k) const {
  check_query(x);
  const Index n = size();
  if (k < 1 || k > n)
    throw std::invalid_argument("k must satisfy 1 <= k <= n");

  if (dim() == 1) {
    const double* v = pts_.data();
    Index r = std::lower_bound(v, v + n, x(0)) - v;
    Index l = r - 1;
    double worst = 0.0;
    for (Index taken = 0; taken < k; ++taken) {
      double dl = l >= 0 ? squared_distance(pts_, l, x) : kInf;
      double dr = r < n ? squared_distance(pts_, r, x) : kInf;
      if (dl < dr) {
        worst = dl;
        --l;
      } else {
        worst = dr;
        ++r;
      }
    }
    return std::sqrt(worst);
  }

  // Bounded max-heap of the k smallest squared distances seen so far.
  std::vector<double> heap;
  heap.reserve(static_cast<std::size_t>(k));
  auto consider = [&](double sq) {
    if (static_cast<Index>(heap.size()) < k) {
      heap.push_back(sq);
      std::push_heap(heap.begin(), heap.end());
    } else if (sq < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = sq;
      std::push_heap(heap.begin(), heap.end());
    }
  };

  // Iterative traversal, nearer child first; prune only on strict excess.
  std::vector<Index> stack;
  stack.push_back(0);
  while (!stack.empty()) {
    Index id = stack.back();
    stack.pop_back();
    bool full = static_cast<Index>(heap.size()) == k;
    if (full && min_sq_to_node(id, x) > heap.front()) continue;
    const Node& node = nodes_[id];
    if (node.leaf()) {
      for (Index i = node.begin; i < node.end; ++i)
        consider(squared_distance(pts_, i, x));
      continue;
    }
    double dl = min_sq_to_node(node.left, x);
    double dr = min_sq_to_node(node.right, x);
    // Push the farther child first so the nearer one is processed next.
    if (dl <= dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return std::sqrt(heap.front());
}

Index KdTree::range_count(const Eigen::Ref<const Vector>& x,
                          double radius) const {
  check_query(x);
  if (radius < 0.0) throw std::invalid_argument("radius must be >= 0");
  const double r2 = radius * radius;
  const Index n = size();

  if (dim() == 1) {
    const double* v = pts_.data();
    Index pos = std::lower_bound(v, v + n, x(0)) - v;
    // Left of pos the squared distance decreases with the index, right of
    // pos it increases; binary-search each side with the exact predicate.
    Index lo = 0, hi = pos;
    while (lo < hi) {
      Index mid = lo + (hi - lo) / 2;
      if (squared_distance(pts_, mid, x) > r2)
        lo = mid + 1;
      else
        hi = mid;
    }
    Index left = pos - lo;
    lo = pos;
    hi = n;
    while (lo < hi) {
      Index mid = lo + (hi - lo) / 2;
      if (squared_distance(pts_, mid, x) <= r2)
        lo = mid + 1;
      else
        hi = mid;
    }
    return left + (lo - pos);
  }

  Index count = 0;
  std::vector<Index> stack;
  stack.push_back(0);
  while (!stack.empty()) {
    Index id = stack.back();
    stack.pop_back();
    if (min_sq_to_node(id, x) > r2) continue;
    const Node& node = nodes_[id];
    if (node.leaf()) {
      for (Index i = node.begin; i < node.end; ++i)
        if (squared_distance(pts_, i, x) <= r2) ++count;
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  return count;
}

void KdTree::for_each_within(const Eigen::Ref<const Vector>& x, double radius,
                             const std::function<void(double)>& visit) const {
  check_query(x);
  if (radius < 0.0) throw std::invalid_argument("radius must be >= 0");
  const double r2 = radius * radius;
  const Index n = size();

  if (dim() == 1) {
    const double* v = pts_.data();
    Index pos = std::lower_bound(v, v + n, x(0)) - v;
    Index i = pos;
    while (i > 0 && squared_distance(pts_, i - 1, x) <= r2) --i;
    for (; i < n; ++i) {
      double sq = squared_distance(pts_, i, x);
      if (i >= pos && sq > r2) break;
      if (sq <= r2) visit(sq);
    }
    return;
  }

  std::vector<Index> stack;
  stack.push_back(0);
  while (!stack.empty()) {
    Index id = stack.back();
    stack.pop_back();
    if (min_sq_to_node(id, x) > r2) continue;
    const Node& node = nodes_[id];
    if (node.leaf()) {
      for (Index i = node.begin; i < node.end; ++i) {
        double sq = squared_distance(pts_, i, x);
        if (sq <= r2) visit(sq);
      }
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
}

std::vector<double> KdTree::kth_distances_ascending(
    const std::vector<double>& queries, Index k) const {
  if (dim() != 1)
    throw std::invalid_argument("batch sweep is defined for d == 1 only");
  const Index n = size();
  if (k < 1 || k > n)
    throw std::invalid_argument("k must satisfy 1 <= k <= n");

  std::vector<double> out(queries.size());
  Vector x(1);
  Index i = 0;  // window start; the k nearest form the window [i, i + k)
  for (std::size_t q = 0; q < queries.size(); ++q) {
    x(0) = queries[q];
    while (i + k < n &&
           squared_distance(pts_, i + k, x) < squared_distance(pts_, i, x))
      ++i;
    double worst = std::max(squared_distance(pts_, i, x),
                            squared_distance(pts_, i + k - 1, x));
    out[q] = std::sqrt(worst);
  }
  return out;
}

double brute_kth_distance(const PointMatrix& pts,
                          const Eigen::Ref<const Vector>& x, Index k) {
  const Index n = pts.rows();
  if (k < 1 || k > n)
    throw std::invalid_argument("k must satisfy 1 <= k <= n");
  std::vector<double> sq(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) sq[i] = squared_distance(pts, i, x);
  std::nth_element(sq.begin(), sq.begin() + (k - 1), sq.end());
  return std::sqrt(sq[k - 1]);
}

Index brute_range_count(const PointMatrix& pts,
                        const Eigen::Ref<const Vector>& x, double radius) {
  if (radius < 0.0) throw std::invalid_argument("radius must be >= 0");
  const double r2 = radius * radius;
  Index count = 0;
  for (Index i = 0; i < pts.rows(); ++i)
    if (squared_distance(pts, i, x) <= r2) ++count;
  return count;
}

}  // namespace knde
