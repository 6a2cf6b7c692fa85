#include "qbell/gellmann.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "qbell/errors.hpp"

namespace qbell {

namespace {

int pair_count(int d) { return d * (d - 1) / 2; }

// Lexicographic rank of the pair (m, k), 1 <= m < k <= d.
int pair_rank(int d, int m, int k) {
  int rank = 0;
  for (int i = 1; i < m; ++i) rank += d - i;
  return rank + (k - m - 1);
}

void check_dim(int d) {
  if (d < 2) throw DimensionError("qudit dimension must be >= 2, got " + std::to_string(d));
}

}  // namespace

int flat_index(int d, GeneratorKind kind, int first, int second) {
  check_dim(d);
  switch (kind) {
    case GeneratorKind::symmetric:
    case GeneratorKind::antisymmetric: {
      if (first < 1 || second > d || first >= second) {
        throw DimensionError("off-diagonal generator needs 1 <= m < k <= d, got (" +
                             std::to_string(first) + ", " + std::to_string(second) +
                             ") for d=" + std::to_string(d));
      }
      const int offset = kind == GeneratorKind::symmetric ? 0 : pair_count(d);
      return offset + pair_rank(d, first, second);
    }
    case GeneratorKind::diagonal:
      if (first < 1 || first > d - 1) {
        throw DimensionError("diagonal generator needs 1 <= l <= d-1, got l=" +
                             std::to_string(first) + " for d=" + std::to_string(d));
      }
      return 2 * pair_count(d) + (first - 1);
  }
  throw DimensionError("unknown generator kind");
}

GeneratorLabel generator_label(int d, int index) {
  check_dim(d);
  const int pairs = pair_count(d);
  if (index < 0 || index >= d * d - 1) {
    throw DimensionError("generator index " + std::to_string(index) + " out of range for d=" +
                         std::to_string(d));
  }
  if (index >= 2 * pairs) return {GeneratorKind::diagonal, index - 2 * pairs + 1, 0};
  const GeneratorKind kind = index < pairs ? GeneratorKind::symmetric : GeneratorKind::antisymmetric;
  int rank = index % pairs;
  int m = 1;
  while (rank >= d - m) {
    rank -= d - m;
    ++m;
  }
  return {kind, m, m + 1 + rank};
}

GeneratorLabel GellMannBasis::label(int j) const { return generator_label(dim_, j); }

GellMannBasis build_basis(int d, int cap) {
  check_dim(d);
  if (d > cap) {
    throw ResourceError("dimension " + std::to_string(d) + " exceeds the basis cap of " +
                        std::to_string(cap));
  }
  GellMannBasis basis;
  basis.dim_ = d;
  const int n = d * d - 1;
  basis.generators_.assign(n, CMatrix::Zero(d, d));
  basis.nonzeros_.resize(n);
  const Complex i_unit(0.0, 1.0);

  for (int m = 1; m <= d; ++m) {
    for (int k = m + 1; k <= d; ++k) {
      const int s = flat_index(d, GeneratorKind::symmetric, m, k);
      basis.nonzeros_[s] = {{m - 1, k - 1, 1.0}, {k - 1, m - 1, 1.0}};
      const int a = flat_index(d, GeneratorKind::antisymmetric, m, k);
      basis.nonzeros_[a] = {{m - 1, k - 1, -i_unit}, {k - 1, m - 1, i_unit}};
    }
  }
  for (int l = 1; l <= d - 1; ++l) {
    const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    auto& entries = basis.nonzeros_[flat_index(d, GeneratorKind::diagonal, l)];
    for (int m = 0; m < l; ++m) entries.push_back({m, m, norm});
    entries.push_back({l, l, -l * norm});
  }
  for (int j = 0; j < n; ++j) {
    for (const auto& e : basis.nonzeros_[j]) basis.generators_[j](e.row, e.col) = e.value;
  }
  return basis;
}

std::shared_ptr<const GellMannBasis> shared_basis(int d) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GellMannBasis>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  auto basis = std::make_shared<const GellMannBasis>(build_basis(d));
  cache.emplace(d, basis);
  return basis;
}

}  // namespace qbell
