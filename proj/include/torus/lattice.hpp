#pragma once

#include <optional>
#include <vector>

#include "torus/circle.hpp"

namespace torus {

// Dense integer matrix, row-major. Small and exact; nothing clever.
struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Int> a;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static IntMatrix identity(std::size_t n);
  IntMatrix mul(const IntMatrix& o) const;
  IntMatrix transpose() const;
  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  void add_row_multiple(std::size_t dst, std::size_t src, const Int& k);
  void add_col_multiple(std::size_t dst, std::size_t src, const Int& k);
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);

  Int det() const;  // Bareiss, exact; square only
};

// Smith normal form U * M * V = D with U, V unimodular and the diagonal of
// D a divisibility chain d_1 | d_2 | ... of nonnegative entries. Pivots are
// chosen as the minimal absolute nonzero entry of the working submatrix.
struct SmithResult {
  IntMatrix U, D, V;
  std::size_t rank = 0;
  std::vector<Int> diag;  // d_1..d_min(r,c) including zeros
};
SmithResult snf(const IntMatrix& m);

// Row-style Hermite normal form, the canonical basis of the row lattice:
// pivots positive, entries below a pivot zero, entries above reduced into
// [0, pivot). Zero rows are dropped.
IntMatrix hnf_rows(const IntMatrix& m);

// Basis of the integer kernel {x : M x = 0}, as columns.
IntMatrix kernel_basis(const IntMatrix& m);

// Intersection of the column lattices of A and B (bases as columns).
IntMatrix lattice_intersection(const IntMatrix& A, const IntMatrix& B);

// True when v lies in the row lattice of the HNF matrix h.
bool hnf_row_member(const IntMatrix& h, const std::vector<Int>& v);

// A closed subgroup of T^d in annihilator form: N = {x : phi(x) = 0 for all
// rows phi of ann}. The unimodular coords matrix W puts N into the shape
// y_i in (1/m_i)Z/Z on the torsion coordinates, free on the last `rank`
// coordinates: N = { W y }.
struct ClosedSubgroup {
  std::size_t dim = 0;
  IntMatrix ann;        // canonical HNF rows; may have zero rows dropped
  IntMatrix coords;     // unimodular W
  std::vector<Int> full_diag;    // d_i per coordinate of y (1 = forced 0 ... )
  std::vector<Int> inv_factors;  // the d_i > 1, divisibility chain
  std::size_t rank = 0;          // torus rank
  std::optional<Int> order;      // set iff finite (rank == 0)

  bool is_full() const { return ann.rows == 0; }
  bool is_finite() const { return rank == 0; }
  bool contains(const TorusPoint& p) const;  // exact
  std::vector<TorusPoint> torsion_generators() const;
  std::vector<TorusPoint> enumerate_finite(std::size_t budget) const;
};

// Annihilator lattice of a set of rational points of T^d, returned as a
// column basis (d x d, full rank since q Z^d always annihilates).
IntMatrix annihilator(const std::vector<TorusPoint>& pts, std::size_t dim);

// Closure of the subgroup generated by the given points. Rational points
// carry their annihilator directly; irrational generators must declare
// their dependency lattice (the characters annihilating them), empty
// meaning none beyond zero.
ClosedSubgroup closure(const std::vector<TorusPoint>& rational_pts,
                       std::size_t dim,
                       const std::optional<IntMatrix>& irrational_dependency =
                           std::nullopt);

// Closed subgroup cut out by an annihilator lattice given as a column
// basis (or an empty matrix for the full torus).
ClosedSubgroup subgroup_from_annihilator(const IntMatrix& basis_cols,
                                         std::size_t dim);

// Common denominator of all coordinates of the given points; throws if any
// coordinate is not rational.
Int common_denominator(const std::vector<TorusPoint>& pts);

}  // namespace torus
