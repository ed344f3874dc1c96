// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Pairwise similarity kernels over a ground set.
//
// A recipe lists weighted components. Feature-group components compare unit
// vectors by cosine, the "hist" component compares colour histograms by
// Pearson correlation. Each component value r in [-1, 1] is mapped to
// (1 + r) / 2 and the components are combined as a weighted average, so
// every entry lies in [0, 1] and d = 1 - s is a dissimilarity. A degenerate
// vector (all-zero feature, constant histogram) contributes 0 for its
// component.
//
// Storage is either a dense n x n float matrix or a symmetrized kNN graph
// where absent entries read as similarity 0 (distance 1).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vsumm/error.hpp"
#include "vsumm/ground_set.hpp"
#include "vsumm/parallel.hpp"
#include "vsumm/strings.hpp"

namespace vsumm {

inline constexpr std::string_view kHistogramComponent = "hist";
inline constexpr std::size_t kMaxDenseKernel = 20000;

struct KernelComponent {
  std::string name;  // feature group, or "hist"
  double weight = 1.0;

  bool operator==(const KernelComponent&) const = default;
};

struct KernelRecipe {
  std::vector<KernelComponent> components;

  bool operator==(const KernelRecipe&) const = default;

  // Rescales weights to sum to one.
  static KernelRecipe make(std::vector<KernelComponent> components) {
    if (components.empty()) throw InvalidArgument("kernel recipe needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
      if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
        throw InvalidArgument("kernel weight for '" + c.name + "' must be non-negative");
      }
      total += c.weight;
    }
    if (!(total > 0.0)) throw InvalidArgument("kernel weights sum to zero");
    for (auto& c : components) c.weight /= total;
    return KernelRecipe{std::move(components)};
  }

  // "scene:0.4,object:0.4,hist:0.2"; omitted weights default to 1 before
  // normalization, so "scene,object,hist" is the equal-weight recipe.
  static KernelRecipe parse(std::string_view text) {
    std::vector<KernelComponent> components;
    for (std::string_view part : detail::split(text, ',')) {
      part = detail::trim(part);
      if (part.empty()) throw InvalidArgument("empty kernel component in '" + std::string(text) + "'");
      KernelComponent c;
      const auto colon = part.find(':');
      c.name = std::string(detail::trim(part.substr(0, colon)));
      if (colon != std::string_view::npos) {
        const std::string w(detail::trim(part.substr(colon + 1)));
        char* end = nullptr;
        c.weight = std::strtod(w.c_str(), &end);
        if (w.empty() || *end != '\0') throw InvalidArgument("bad kernel weight in '" + std::string(part) + "'");
      }
      if (c.name.empty()) throw InvalidArgument("kernel component needs a name");
      components.push_back(std::move(c));
    }
    return make(std::move(components));
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (i) os << ',';
      os << components[i].name << ':' << components[i].weight;
    }
    return os.str();
  }
};

// Frames and snippets: scene + object + histogram. Faces: face features.
// Scenes: scene + histogram. Objects and humans: object + histogram.
inline KernelRecipe default_recipe(const GroundSet& gs) {
  if (gs.kind != GroundSetKind::entity) return KernelRecipe::parse("scene,object,hist");
  switch (gs.entity_kind.value_or(EntityKind::object)) {
    case EntityKind::face: return KernelRecipe::parse("face");
    case EntityKind::scene: return KernelRecipe::parse("scene,hist");
    case EntityKind::object:
    case EntityKind::human: return KernelRecipe::parse("object,hist");
  }
  return KernelRecipe::parse("object,hist");
}

class SimilarityKernel {
 public:
  struct Neighbor {
    std::uint32_t index;
    float value;
  };

  SimilarityKernel() = default;

  // Dense kernel from a row-major n x n matrix. Checks symmetry, range and
  // that each diagonal entry is its row maximum.
  static SimilarityKernel from_dense(std::size_t n, std::vector<float> values) {
    if (values.size() != n * n) throw InvalidArgument("dense kernel needs n*n values");
    for (std::size_t i = 0; i < n; ++i) {
      const float diag = values[i * n + i];
      for (std::size_t j = 0; j < n; ++j) {
        const float v = values[i * n + j];
        if (!(v >= 0.0f && v <= 1.0f)) throw InvalidArgument("kernel entries must lie in [0,1]");
        if (v != values[j * n + i]) throw InvalidArgument("kernel must be symmetric");
        if (v > diag) throw InvalidArgument("kernel diagonal must be the row maximum");
      }
    }
    SimilarityKernel k;
    k.n_ = n;
    k.dense_ = std::move(values);
    k.compute_row_sums();
    return k;
  }

  std::size_t size() const { return n_; }
  bool is_sparse() const { return sparse_; }
  // Neighbours kept per row before symmetrization (0 for dense kernels).
  std::size_t knn() const { return knn_; }

  // Unchecked lookup.
  double operator()(std::size_t i, std::size_t j) const {
    if (!sparse_) return dense_[i * n_ + j];
    const auto row = sparse_row(i);
    const auto it = std::lower_bound(row.begin(), row.end(), j,
                                     [](const Neighbor& nb, std::size_t idx) { return nb.index < idx; });
    return (it != row.end() && it->index == j) ? it->value : 0.0;
  }

  double similarity(std::size_t i, std::size_t j) const {
    check_index(i, j);
    return (*this)(i, j);
  }

  // d_ij = 1 - s_ij.
  double distance(std::size_t i, std::size_t j) const { return 1.0 - similarity(i, j); }

  std::span<const float> dense_row(std::size_t i) const {
    return {dense_.data() + i * n_, n_};
  }

  // Neighbours of i sorted by index, diagonal included.
  std::span<const Neighbor> sparse_row(std::size_t i) const {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  // Visits every stored (j, s_ij) of row i; dense rows visit all j.
  template <class Fn>
  void for_each_in_row(std::size_t i, Fn&& fn) const {
    if (sparse_) {
      for (const Neighbor& nb : sparse_row(i)) fn(static_cast<std::size_t>(nb.index), static_cast<double>(nb.value));
    } else {
      const float* row = dense_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) fn(j, static_cast<double>(row[j]));
    }
  }

  // Sum over all j of d_ij, computed once at construction.
  double distance_row_sum(std::size_t i) const { return distance_row_sums_.at(i); }

  std::size_t memory_bytes() const {
    return dense_.size() * sizeof(float) + neighbors_.size() * sizeof(Neighbor) +
           offsets_.size() * sizeof(std::size_t) + distance_row_sums_.size() * sizeof(double);
  }

  // Keeps the k most similar other items per row (ties to the lower index)
  // plus the diagonal, then symmetrizes by union. Retained values are
  // copied bit-for-bit.
  SimilarityKernel sparsify(std::size_t k) const {
    if (sparse_) throw InvalidArgument("kernel is already sparse");
    check_knn(k, n_);
    std::vector<std::vector<Neighbor>> top(n_);
    std::vector<float> diagonal(n_);
    parallel_for(n_, [&](std::size_t i) {
      std::vector<float> row(dense_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                             dense_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
      diagonal[i] = row[i];
      top[i] = select_top(row, i, k);
    });
    return assemble_sparse(n_, k, top, diagonal);
  }

  // Internal: builds from per-row top-k lists (without diagonal).
  static SimilarityKernel assemble_sparse(std::size_t n, std::size_t k,
                                          const std::vector<std::vector<Neighbor>>& top,
                                          const std::vector<float>& diagonal = {}) {
    std::vector<std::vector<Neighbor>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Neighbor& nb : top[i]) {
        rows[i].push_back(nb);
        rows[nb.index].push_back({static_cast<std::uint32_t>(i), nb.value});
      }
    }
    SimilarityKernel out;
    out.n_ = n;
    out.sparse_ = true;
    out.knn_ = k;
    out.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& row = rows[i];
      row.push_back({static_cast<std::uint32_t>(i), diagonal.empty() ? 1.0f : diagonal[i]});
      std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
      row.erase(std::unique(row.begin(), row.end(),
                            [](const Neighbor& a, const Neighbor& b) { return a.index == b.index; }),
                row.end());
      out.offsets_[i + 1] = out.offsets_[i] + row.size();
    }
    out.neighbors_.reserve(out.offsets_[n]);
    for (auto& row : rows) out.neighbors_.insert(out.neighbors_.end(), row.begin(), row.end());
    out.compute_row_sums();
    return out;
  }

  // Internal: the (value desc, index asc) top-k of a row, self excluded.
  static std::vector<Neighbor> select_top(const std::vector<float>& row, std::size_t self, std::size_t k) {
    std::vector<std::uint32_t> idx;
    idx.reserve(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j != self) idx.push_back(static_cast<std::uint32_t>(j));
    }
    auto better = [&](std::uint32_t a, std::uint32_t b) {
      return row[a] != row[b] ? row[a] > row[b] : a < b;
    };
    const std::size_t keep = std::min(k, idx.size());
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(), better);
    idx.resize(keep);
    std::vector<Neighbor> out;
    out.reserve(keep);
    for (std::uint32_t j : idx) out.push_back({j, row[j]});
    return out;
  }

  static void check_knn(std::size_t k, std::size_t n) {
    if (k == 0) throw InvalidArgument("kNN sparsification needs k >= 1");
    if (k >= n) throw InvalidArgument("kNN sparsification needs k < n (k=" + std::to_string(k) +
                                      ", n=" + std::to_string(n) + ")");
  }

  // Internal: adopts a finished dense matrix without re-validation.
  static SimilarityKernel adopt_dense(std::size_t n, std::vector<float> values) {
    SimilarityKernel k;
    k.n_ = n;
    k.dense_ = std::move(values);
    k.compute_row_sums();
    return k;
  }

 private:
  void check_index(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) {
      throw std::out_of_range("kernel index (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") out of range for n=" + std::to_string(n_));
    }
  }

  void compute_row_sums() {
    distance_row_sums_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double sum = 0.0;
      if (sparse_) {
        const auto row = sparse_row(i);
        for (const Neighbor& nb : row) sum += 1.0 - static_cast<double>(nb.value);
        sum += static_cast<double>(n_ - row.size());
      } else {
        const float* row = dense_.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) sum += 1.0 - static_cast<double>(row[j]);
      }
      distance_row_sums_[i] = sum;
    }
  }

  std::size_t n_ = 0;
  bool sparse_ = false;
  std::size_t knn_ = 0;
  std::vector<float> dense_;
  std::vector<Neighbor> neighbors_;
  std::vector<std::size_t> offsets_;
  std::vector<double> distance_row_sums_;
};

namespace detail {

// Item embeddings for a recipe: one concatenated, pre-scaled vector per item
// so that the weighted average of mapped components reduces to a single dot
// product plus a per-pair constant.
class KernelEmbedding {
 public:
  KernelEmbedding(const GroundSet& gs, const KernelRecipe& recipe) : n_(gs.size()) {
    if (gs.empty()) throw InvalidArgument("cannot build a kernel over an empty ground set");
    if (recipe.components.empty()) throw InvalidArgument("kernel recipe needs at least one component");
    std::vector<std::size_t> dims;
    for (const auto& c : recipe.components) {
      const bool hist = c.name == kHistogramComponent;
      const std::vector<double>* first = lookup(gs.views[0], c.name, hist, 0);
      dims.push_back(first->size());
    }
    width_ = std::accumulate(dims.begin(), dims.end(), std::size_t{0});
    const std::size_t ncomp = recipe.components.size();
    data_.assign(n_ * width_, 0.0);
    valid_.assign(n_ * ncomp, 0);
    half_weights_.resize(ncomp);
    for (std::size_t c = 0; c < ncomp; ++c) half_weights_[c] = 0.5 * recipe.components[c].weight;

    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t offset = 0;
      for (std::size_t c = 0; c < ncomp; ++c) {
        const auto& comp = recipe.components[c];
        const bool hist = comp.name == kHistogramComponent;
        const std::vector<double>& v = *lookup(gs.views[i], comp.name, hist, i);
        if (v.size() != dims[c]) {
          throw InvalidArgument("dimension mismatch in '" + comp.name + "' for item " + std::to_string(i) +
                                " (" + std::to_string(v.size()) + " vs " + std::to_string(dims[c]) + ")");
        }
        std::vector<double> u = v;
        if (hist) {
          const double mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
          for (double& x : u) x -= mean;
        }
        double norm = 0.0;
        for (double x : u) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 1e-12) {
          const double scale = std::sqrt(half_weights_[c]) / norm;
          double* dst = data_.data() + i * width_ + offset;
          for (std::size_t d = 0; d < u.size(); ++d) dst[d] = u[d] * scale;
          valid_[i * ncomp + c] = 1;
        }
        offset += dims[c];
      }
    }
    self_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < ncomp; ++c) s += valid_[i * ncomp + c] ? 2.0 * half_weights_[c] : 0.0;
      self_[i] = std::min(1.0, s);
    }
  }

  std::size_t size() const { return n_; }

  // s_ii: total weight of the item's non-degenerate components.
  double self_similarity(std::size_t i) const { return self_[i]; }

  double similarity(std::size_t i, std::size_t j) const {
    if (i == j) return self_[i];
    const std::size_t ncomp = half_weights_.size();
    double constant = 0.0;
    for (std::size_t c = 0; c < ncomp; ++c) {
      if (valid_[i * ncomp + c] && valid_[j * ncomp + c]) constant += half_weights_[c];
    }
    const double* a = data_.data() + i * width_;
    const double* b = data_.data() + j * width_;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t d = 0;
    for (; d + 4 <= width_; d += 4) {
      s0 += a[d] * b[d];
      s1 += a[d + 1] * b[d + 1];
      s2 += a[d + 2] * b[d + 2];
      s3 += a[d + 3] * b[d + 3];
    }
    for (; d < width_; ++d) s0 += a[d] * b[d];
    const double s = constant + ((s0 + s1) + (s2 + s3));
    return std::clamp(s, 0.0, std::min(self_[i], self_[j]));
  }

 private:
  static const std::vector<double>* lookup(const ItemView& view, const std::string& name, bool hist,
                                           std::size_t item) {
    if (hist) {
      if (view.hist.empty()) {
        throw InvalidArgument("item " + std::to_string(item) + " has no colour histogram");
      }
      return &view.hist;
    }
    const auto it = view.features.find(name);
    if (it == view.features.end()) {
      throw InvalidArgument("item " + std::to_string(item) + " has no feature group '" + name + "'");
    }
    return &it->second;
  }

  std::size_t n_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
  std::vector<char> valid_;
  std::vector<double> half_weights_;
  std::vector<double> self_;
};

}  // namespace detail

// Neighbour count forced for ground sets too large for a dense kernel.
inline std::size_t forced_knn(std::size_t n) {
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(n))));
}

inline SimilarityKernel build_kernel(const GroundSet& gs, const KernelRecipe& recipe,
                                     std::optional<std::size_t> knn = std::nullopt) {
  const detail::KernelEmbedding emb(gs, recipe);
  const std::size_t n = emb.size();
  if (!knn && n > kMaxDenseKernel) knn = forced_knn(n);
  if (knn) SimilarityKernel::check_knn(*knn, n);

  if (!knn) {
    std::vector<float> values(n * n);
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = i; j < n; ++j) {
        const auto v = static_cast<float>(emb.similarity(i, j));
        values[i * n + j] = v;
        values[j * n + i] = v;
      }
    }, 16);
    return SimilarityKernel::adopt_dense(n, std::move(values));
  }

  std::vector<std::vector<SimilarityKernel::Neighbor>> top(n);
  std::vector<float> diagonal(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<float> row(n);
    for (std::size_t j = 0; j < n; ++j) {
      // Same operand order as the dense path so retained entries match bit-for-bit.
      row[j] = static_cast<float>(i <= j ? emb.similarity(i, j) : emb.similarity(j, i));
    }
    diagonal[i] = row[i];
    top[i] = SimilarityKernel::select_top(row, i, *knn);
  }, 16);
  return SimilarityKernel::assemble_sparse(n, *knn, top, diagonal);
}

}  // namespace vsumm
