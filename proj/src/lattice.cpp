#include "torus/lattice.hpp"

#include <algorithm>

namespace torus {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::mul(const IntMatrix& o) const {
  if (cols != o.rows) throw std::invalid_argument("matrix product shape");
  IntMatrix r(rows, o.cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      if (sgn(at(i, k)) == 0) continue;
      for (std::size_t j = 0; j < o.cols; ++j)
        r.at(i, j) += at(i, k) * o.at(k, j);
    }
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
  return r;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols; ++c) std::swap(at(i, c), at(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows; ++r) std::swap(at(r, i), at(r, j));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src,
                                 const Int& k) {
  if (sgn(k) == 0) return;
  for (std::size_t c = 0; c < cols; ++c) at(dst, c) += k * at(src, c);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src,
                                 const Int& k) {
  if (sgn(k) == 0) return;
  for (std::size_t r = 0; r < rows; ++r) at(r, dst) += k * at(r, src);
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols; ++c) at(i, c) = -at(i, c);
}

void IntMatrix::negate_col(std::size_t j) {
  for (std::size_t r = 0; r < rows; ++r) at(r, j) = -at(r, j);
}

Int IntMatrix::det() const {
  if (rows != cols) throw std::invalid_argument("det of non-square matrix");
  if (rows == 0) return 1;
  IntMatrix m = *this;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < rows; ++k) {
    if (sgn(m.at(k, k)) == 0) {
      std::size_t swap = k;
      for (std::size_t i = k + 1; i < rows; ++i)
        if (sgn(m.at(i, k)) != 0) {
          swap = i;
          break;
        }
      if (swap == k) return 0;
      m.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < rows; ++i)
      for (std::size_t j = k + 1; j < rows; ++j) {
        Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = num / prev;  // exact by Bareiss
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(rows - 1, rows - 1) : Int(-m.at(rows - 1, rows - 1));
}

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SmithResult snf(const IntMatrix& m) {
  SmithResult r;
  r.D = m;
  r.U = IntMatrix::identity(m.rows);
  r.V = IntMatrix::identity(m.cols);
  IntMatrix& D = r.D;
  IntMatrix& U = r.U;
  IntMatrix& V = r.V;
  const std::size_t nmin = std::min(m.rows, m.cols);

  std::size_t t = 0;
  while (t < nmin) {
    // Pivot: minimal absolute nonzero entry of the trailing submatrix.
    bool found = false;
    std::size_t pi = t, pj = t;
    Int best;
    for (std::size_t i = t; i < D.rows; ++i)
      for (std::size_t j = t; j < D.cols; ++j) {
        if (sgn(D.at(i, j)) == 0) continue;
        Int a = abs(D.at(i, j));
        if (!found || a < best) {
          found = true;
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    D.swap_rows(t, pi);
    U.swap_rows(t, pi);
    D.swap_cols(t, pj);
    V.swap_cols(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = 0; i < D.rows; ++i) {
        if (i == t || sgn(D.at(i, t)) == 0) continue;
        Int q = floor_div(D.at(i, t), D.at(t, t));
        if (sgn(q) != 0) {
          D.add_row_multiple(i, t, -q);
          U.add_row_multiple(i, t, -q);
        }
        if (sgn(D.at(i, t)) != 0) {
          // Remainder is strictly smaller than the pivot; promote it.
          D.swap_rows(t, i);
          U.swap_rows(t, i);
          clean = false;
        }
      }
      if (!clean) continue;
      for (std::size_t j = 0; j < D.cols; ++j) {
        if (j == t || sgn(D.at(t, j)) == 0) continue;
        Int q = floor_div(D.at(t, j), D.at(t, t));
        if (sgn(q) != 0) {
          D.add_col_multiple(j, t, -q);
          V.add_col_multiple(j, t, -q);
        }
        if (sgn(D.at(t, j)) != 0) {
          D.swap_cols(t, j);
          V.swap_cols(t, j);
          clean = false;
        }
      }
    }

    // Divisibility: the pivot must divide everything to its lower right.
    bool redo = false;
    for (std::size_t i = t + 1; i < D.rows && !redo; ++i)
      for (std::size_t j = t + 1; j < D.cols && !redo; ++j)
        if (D.at(i, j) % D.at(t, t) != 0) {
          D.add_row_multiple(t, i, 1);
          U.add_row_multiple(t, i, 1);
          redo = true;
        }
    if (redo) continue;  // re-eliminate at the same t with a smaller pivot

    if (sgn(D.at(t, t)) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
    ++t;
  }

  r.diag.reserve(nmin);
  for (std::size_t i = 0; i < nmin; ++i) {
    r.diag.push_back(D.at(i, i));
    if (sgn(D.at(i, i)) != 0) r.rank = i + 1;
  }
  return r;
}

IntMatrix hnf_rows(const IntMatrix& m) {
  IntMatrix h = m;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols && r < h.rows; ++c) {
    // Euclid down column c among rows >= r.
    while (true) {
      std::size_t pivot = h.rows;
      Int best;
      for (std::size_t i = r; i < h.rows; ++i) {
        if (sgn(h.at(i, c)) == 0) continue;
        Int a = abs(h.at(i, c));
        if (pivot == h.rows || a < best) {
          pivot = i;
          best = a;
        }
      }
      if (pivot == h.rows) break;  // column clear below r
      h.swap_rows(r, pivot);
      bool residue = false;
      for (std::size_t i = r + 1; i < h.rows; ++i) {
        if (sgn(h.at(i, c)) == 0) continue;
        Int q = floor_div(h.at(i, c), h.at(r, c));
        h.add_row_multiple(i, r, -q);
        if (sgn(h.at(i, c)) != 0) residue = true;
      }
      if (!residue) break;
    }
    if (sgn(h.at(r, c)) == 0) continue;
    if (sgn(h.at(r, c)) < 0) h.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(h.at(i, c), h.at(r, c));
      h.add_row_multiple(i, r, -q);
    }
    ++r;
  }
  IntMatrix out(r, h.cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < h.cols; ++j) out.at(i, j) = h.at(i, j);
  return out;
}

IntMatrix kernel_basis(const IntMatrix& m) {
  if (m.rows == 0) return IntMatrix::identity(m.cols);
  SmithResult s = snf(m);
  std::vector<std::size_t> free_cols;
  for (std::size_t i = 0; i < m.cols; ++i) {
    bool constrained = i < s.diag.size() && sgn(s.diag[i]) != 0;
    if (!constrained) free_cols.push_back(i);
  }
  IntMatrix k(m.cols, free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j)
    for (std::size_t i = 0; i < m.cols; ++i)
      k.at(i, j) = s.V.at(i, free_cols[j]);
  return k;
}

namespace {

// Canonical column basis of the lattice spanned by the columns.
IntMatrix col_canonical(const IntMatrix& cols) {
  return hnf_rows(cols.transpose()).transpose();
}

}  // namespace

IntMatrix lattice_intersection(const IntMatrix& A, const IntMatrix& B) {
  if (A.rows != B.rows) throw std::invalid_argument("lattice dim mismatch");
  const std::size_t d = A.rows;
  if (A.cols == 0 || B.cols == 0) return IntMatrix(d, 0);
  IntMatrix m(d, A.cols + B.cols);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) m.at(i, j) = A.at(i, j);
    for (std::size_t j = 0; j < B.cols; ++j)
      m.at(i, A.cols + j) = -B.at(i, j);
  }
  IntMatrix k = kernel_basis(m);
  IntMatrix top(A.cols, k.cols);
  for (std::size_t i = 0; i < A.cols; ++i)
    for (std::size_t j = 0; j < k.cols; ++j) top.at(i, j) = k.at(i, j);
  return col_canonical(A.mul(top));
}

bool hnf_row_member(const IntMatrix& h, const std::vector<Int>& v) {
  if (v.size() != h.cols) throw std::invalid_argument("member dim mismatch");
  std::vector<Int> w = v;
  std::size_t row = 0;
  for (std::size_t c = 0; c < h.cols; ++c) {
    if (row < h.rows && sgn(h.at(row, c)) != 0) {
      if (w[c] % h.at(row, c) != 0) return false;
      Int q = w[c] / h.at(row, c);
      for (std::size_t j = c; j < h.cols; ++j) w[j] -= q * h.at(row, j);
      ++row;
    } else if (sgn(w[c]) != 0) {
      return false;
    }
  }
  for (const auto& x : w)
    if (sgn(x) != 0) return false;
  return true;
}

Int common_denominator(const std::vector<TorusPoint>& pts) {
  Int q = 1;
  for (const auto& p : pts)
    for (const auto& c : p.x) {
      if (!c.rep().is_rational())
        throw std::invalid_argument("point has a non-rational coordinate");
      q = int_lcm(q, c.rep().as_rat().get_den());
    }
  return q;
}

IntMatrix annihilator(const std::vector<TorusPoint>& pts, std::size_t dim) {
  for (const auto& p : pts)
    if (p.dim() != dim) throw std::invalid_argument("point dim mismatch");
  if (pts.empty()) return IntMatrix::identity(dim);
  Int q = common_denominator(pts);
  IntMatrix v(pts.size(), dim);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const Rat& r = pts[i].x[j].rep().as_rat();
      v.at(i, j) = r.get_num() * (q / r.get_den());
    }
  // Same row lattice, at most dim rows: snf's transform matrices on the raw
  // point matrix would be quadratic in the point count.
  SmithResult s = snf(hnf_rows(v));
  // V phi = 0 mod q  <=>  psi = W^-1 phi has psi_i divisible by
  // q / gcd(d_i, q); the basis is W * diag(t_i).
  IntMatrix basis(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Int t = 1;
    if (i < s.diag.size() && sgn(s.diag[i]) != 0)
      t = q / int_gcd(s.diag[i], q);
    for (std::size_t rr = 0; rr < dim; ++rr)
      basis.at(rr, i) = s.V.at(rr, i) * t;
  }
  return col_canonical(basis);
}

ClosedSubgroup subgroup_from_annihilator(const IntMatrix& basis_cols,
                                         std::size_t dim) {
  ClosedSubgroup g;
  g.dim = dim;
  if (basis_cols.cols == 0) {
    g.ann = IntMatrix(0, dim);
    g.coords = IntMatrix::identity(dim);
    g.full_diag.assign(dim, 0);
    g.rank = dim;
    return g;
  }
  if (basis_cols.rows != dim)
    throw std::invalid_argument("annihilator basis dim mismatch");
  IntMatrix rows = hnf_rows(basis_cols.transpose());
  g.ann = rows;
  SmithResult s = snf(rows);
  g.coords = s.V;
  g.full_diag.assign(dim, 0);
  Int order = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    Int d = i < s.diag.size() ? s.diag[i] : Int(0);
    g.full_diag[i] = d;
    if (sgn(d) == 0) {
      ++g.rank;
    } else {
      if (d > 1) g.inv_factors.push_back(d);
      order *= d;
    }
  }
  if (g.rank == 0) g.order = order;
  return g;
}

bool ClosedSubgroup::contains(const TorusPoint& p) const {
  if (p.dim() != dim) throw std::invalid_argument("contains: dim mismatch");
  for (std::size_t i = 0; i < ann.rows; ++i) {
    std::vector<Int> row(dim);
    for (std::size_t j = 0; j < dim; ++j) row[j] = ann.at(i, j);
    CircleValue v = eval_char(Character(std::move(row)), p);
    if (!v.is_zero()) return false;
  }
  return true;
}

std::vector<TorusPoint> ClosedSubgroup::torsion_generators() const {
  std::vector<TorusPoint> out;
  for (std::size_t i = 0; i < dim; ++i) {
    if (sgn(full_diag[i]) == 0 || full_diag[i] == 1) continue;
    std::vector<CircleValue> coords_v(dim);
    for (std::size_t j = 0; j < dim; ++j)
      coords_v[j] = CircleValue(make_rat(coords.at(j, i), full_diag[i]));
    out.emplace_back(std::move(coords_v));
  }
  return out;
}

std::vector<TorusPoint> ClosedSubgroup::enumerate_finite(
    std::size_t budget) const {
  if (rank != 0)
    throw std::invalid_argument("cannot enumerate an infinite subgroup");
  Int total = order.value();
  if (total > static_cast<unsigned long>(budget))
    throw budget_exhausted("finite subgroup too large to enumerate");
  std::vector<TorusPoint> out;
  std::vector<Int> y(dim, 0);
  while (true) {
    std::vector<CircleValue> coords_v(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      Rat acc(0);
      for (std::size_t i = 0; i < dim; ++i) {
        if (full_diag[i] <= 1) continue;
        acc += make_rat(coords.at(j, i) * y[i], full_diag[i]);
      }
      coords_v[j] = CircleValue(acc);
    }
    out.emplace_back(std::move(coords_v));
    // Odometer over the torsion coordinates.
    std::size_t i = 0;
    for (; i < dim; ++i) {
      if (full_diag[i] <= 1) continue;
      ++y[i];
      if (y[i] < full_diag[i]) break;
      y[i] = 0;
    }
    if (i == dim) break;
  }
  return out;
}

ClosedSubgroup closure(const std::vector<TorusPoint>& rational_pts,
                       std::size_t dim,
                       const std::optional<IntMatrix>& irrational_dependency) {
  IntMatrix a = annihilator(rational_pts, dim);
  if (irrational_dependency) {
    const IntMatrix& dep = *irrational_dependency;
    if (dep.cols == 0) {
      a = IntMatrix(dim, 0);
    } else {
      a = lattice_intersection(a, dep);
    }
  }
  return subgroup_from_annihilator(a, dim);
}

}  // namespace torus
