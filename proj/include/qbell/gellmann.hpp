#pragma once

#include <memory>
#include <vector>

#include "qbell/types.hpp"

namespace qbell {

inline constexpr int kDefaultDimensionCap = 64;

enum class GeneratorKind { symmetric, antisymmetric, diagonal };

/// Position of a generator inside its family. Indices are 1-based, as in the
/// usual |m><k| notation. For diagonal generators `first` holds l and
/// `second` is 0.
struct GeneratorLabel {
  GeneratorKind kind = GeneratorKind::symmetric;
  int first = 0;
  int second = 0;

  friend bool operator==(const GeneratorLabel&, const GeneratorLabel&) = default;
};

/// Generalized Gell-Mann generators of SU(d), ordered as
///   all symmetric (m<k, lexicographic), all antisymmetric (same order),
///   diagonal l = 1..d-1.
/// Each generator is hermitian, traceless and tr[G_j G_k] = 2 delta_jk.
/// Immutable once built.
class GellMannBasis {
 public:
  struct Entry {
    int row;
    int col;
    Complex value;
  };

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(generators_.size()); }

  const CMatrix& operator[](int j) const { return generators_.at(j); }
  const std::vector<CMatrix>& generators() const noexcept { return generators_; }

  /// Nonzero entries of generator j (at most d of them).
  const std::vector<Entry>& nonzeros(int j) const { return nonzeros_.at(j); }

  GeneratorLabel label(int j) const;

 private:
  friend GellMannBasis build_basis(int d, int cap);

  int dim_ = 0;
  std::vector<CMatrix> generators_;
  std::vector<std::vector<Entry>> nonzeros_;
};

/// Throws DimensionError for d < 2 and ResourceError for d > cap.
GellMannBasis build_basis(int d, int cap = kDefaultDimensionCap);

/// Process-wide cached basis for dimension d (thread-safe).
std::shared_ptr<const GellMannBasis> shared_basis(int d);

/// 0-based position in the generator ordering. For the diagonal kind pass l
/// as `first` and leave `second` at 0.
int flat_index(int d, GeneratorKind kind, int first, int second = 0);

/// Inverse of flat_index.
GeneratorLabel generator_label(int d, int index);

}  // namespace qbell
