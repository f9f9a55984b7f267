#include "dioph/lattice.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "dioph/errors.hpp"

namespace dioph::lattice {

namespace {

using Row = std::vector<BigInt>;
using Matrix = std::vector<Row>;

Matrix to_big(const LatticeBasis& basis) {
  Matrix m;
  m.reserve(basis.rank());
  for (const auto& v : basis.vectors) m.emplace_back(v.begin(), v.end());
  return m;
}

LatticeBasis from_big(std::size_t n, const Matrix& rows) {
  LatticeBasis out;
  out.ambient_dim = n;
  for (const auto& r : rows) {
    IntVector v(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (r[j] > std::numeric_limits<std::int64_t>::max() || r[j] < std::numeric_limits<std::int64_t>::min()) {
        throw OverflowError("lattice entry exceeds 64-bit range");
      }
      v[j] = static_cast<std::int64_t>(r[j]);
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

// Exact determinant by fraction-free Bareiss elimination.
BigInt determinant(Matrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

BigInt gram_det(const Matrix& rows, std::size_t n) {
  const std::size_t r = rows.size();
  Matrix g(r, Row(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      BigInt dot = 0;
      for (std::size_t c = 0; c < n; ++c) dot += rows[i][c] * rows[j][c];
      g[i][j] = dot;
      g[j][i] = dot;
    }
  }
  return determinant(std::move(g));
}

// Calls f(det B_I) for every r-subset I of the n coordinates.
void for_each_maximal_minor(const Matrix& rows, std::size_t n, const std::function<void(const BigInt&)>& f) {
  const std::size_t r = rows.size();
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  for (;;) {
    Matrix sub(r, Row(r));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) sub[i][j] = rows[i][idx[j]];
    }
    f(determinant(std::move(sub)));
    std::size_t pos = r;
    while (pos > 0 && idx[pos - 1] == n - r + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void require_rank(const LatticeBasis& basis) {
  if (basis.rank() == 0) throw DomainError("operation needs a basis of rank >= 1");
  for (const auto& v : basis.vectors) {
    if (v.size() != basis.ambient_dim) throw DomainError("basis vector length differs from ambient dimension");
  }
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Row echelon form over the first `pivot_cols` columns by unimodular row
// operations. Returns the rank; rows past the rank are zero in those columns.
// Pivot columns are written to `pivots`.
std::size_t echelonize(Matrix& m, std::size_t pivot_cols, std::vector<std::size_t>* pivots = nullptr) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < pivot_cols && rank < m.size(); ++col) {
    for (;;) {
      // Smallest nonzero magnitude in this column moves to the pivot slot.
      std::size_t best = m.size();
      for (std::size_t i = rank; i < m.size(); ++i) {
        if (m[i][col] == 0) continue;
        if (best == m.size() || abs(m[i][col]) < abs(m[best][col])) best = i;
      }
      if (best == m.size()) break;
      std::swap(m[rank], m[best]);
      bool done = true;
      for (std::size_t i = rank + 1; i < m.size(); ++i) {
        if (m[i][col] == 0) continue;
        BigInt q = m[i][col] / m[rank][col];
        for (std::size_t j = 0; j < m[i].size(); ++j) m[i][j] -= q * m[rank][j];
        if (m[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rank < m.size() && m[rank][col] != 0) {
      if (m[rank][col] < 0) {
        for (auto& e : m[rank]) e = -e;
      }
      if (pivots) pivots->push_back(col);
      ++rank;
    }
  }
  return rank;
}

// Full Hermite normal form of the row space; zero rows dropped.
Matrix hermite(Matrix m, std::size_t n, std::vector<std::size_t>* pivots_out = nullptr) {
  std::vector<std::size_t> pivots;
  const std::size_t rank = echelonize(m, n, &pivots);
  m.resize(rank);
  for (std::size_t r = 0; r < rank; ++r) {
    const std::size_t c = pivots[r];
    for (std::size_t i = 0; i < r; ++i) {
      BigInt q = floor_div(m[i][c], m[r][c]);
      if (q == 0) continue;
      for (std::size_t j = 0; j < n; ++j) m[i][j] -= q * m[r][j];
    }
  }
  if (pivots_out) *pivots_out = std::move(pivots);
  return m;
}

struct Echelon {
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::size_t> pivots;
};

Echelon echelon_int64(const LatticeBasis& basis) {
  std::vector<std::size_t> pivots;
  Matrix h = hermite(to_big(basis), basis.ambient_dim, &pivots);
  if (h.size() != basis.rank()) throw DomainError("basis vectors are linearly dependent");
  return {from_big(basis.ambient_dim, h).vectors, std::move(pivots)};
}

// Depth-first walk over integer combinations of the echelon rows. The pivot
// coordinate of row i is fixed once t_0..t_i are chosen, which bounds t_i to
// an interval; coordinates left of the next pivot are final and pruned.
template <typename Visit>
void walk_box(const Echelon& e, std::size_t n, std::int64_t A, Visit&& visit) {
  const std::size_t r = e.rows.size();
  std::vector<__int128> acc(n, 0);
  std::vector<std::int64_t> point(n);
  auto emit = [&]() {
    for (std::size_t j = 0; j < n; ++j) {
      if (acc[j] > A || acc[j] < -A) return;
    }
    for (std::size_t j = 0; j < n; ++j) point[j] = static_cast<std::int64_t>(acc[j]);
    visit(point);
  };
  if (r == 0) {
    emit();
    return;
  }
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    const auto& row = e.rows[i];
    const std::size_t pc = e.pivots[i];
    const __int128 piv = row[pc];
    const __int128 base = acc[pc];
    // |base + t * piv| <= A
    __int128 lo_num = -A - base;
    __int128 hi_num = A - base;
    __int128 lo = lo_num >= 0 ? (lo_num + piv - 1) / piv : -((-lo_num) / piv);
    __int128 hi = hi_num >= 0 ? hi_num / piv : -((-hi_num + piv - 1) / piv);
    const std::size_t final_upto = (i + 1 < r) ? e.pivots[i + 1] : n;
    for (__int128 t = lo; t <= hi; ++t) {
      for (std::size_t j = pc; j < n; ++j) acc[j] += t * row[j];
      bool ok = true;
      for (std::size_t j = pc; j < final_upto; ++j) {
        if (acc[j] > A || acc[j] < -A) {
          ok = false;
          break;
        }
      }
      if (ok) {
        if (i + 1 == r) {
          emit();
        } else {
          rec(i + 1);
        }
      }
      for (std::size_t j = pc; j < n; ++j) acc[j] -= t * row[j];
    }
  };
  // Coordinates before the first pivot are identically zero.
  rec(0);
}

}  // namespace

LatticeBasis make_basis(std::size_t ambient_dim, std::vector<IntVector> vectors) {
  LatticeBasis b{ambient_dim, std::move(vectors)};
  if (b.rank() > ambient_dim) throw DomainError("rank exceeds ambient dimension");
  if (b.rank() == 0) return b;
  require_rank(b);
  if (gram_det(to_big(b), ambient_dim) == 0) throw DomainError("basis vectors are linearly dependent");
  return b;
}

BigInt discriminant_squared_gram(const LatticeBasis& basis) {
  if (basis.rank() == 0) return 1;  // zero lattice: empty determinant
  require_rank(basis);
  BigInt d = gram_det(to_big(basis), basis.ambient_dim);
  if (d == 0) throw DomainError("basis vectors are linearly dependent (Gram determinant 0)");
  return d;
}

BigInt discriminant_squared_minors(const LatticeBasis& basis) {
  if (basis.rank() == 0) return 1;  // zero lattice: empty determinant
  require_rank(basis);
  if (basis.rank() > basis.ambient_dim) throw DomainError("rank exceeds ambient dimension");
  BigInt sum = 0;
  for_each_maximal_minor(to_big(basis), basis.ambient_dim, [&](const BigInt& det) { sum += det * det; });
  if (sum == 0) throw DomainError("basis vectors are linearly dependent");
  return sum;
}

BigInt discriminant_squared(const LatticeBasis& basis) {
  BigInt gram = discriminant_squared_gram(basis);
  BigInt minors = discriminant_squared_minors(basis);
  if (gram != minors) {
    throw NumericalError("Gram and minor discriminants disagree: " + gram.str() + " vs " + minors.str());
  }
  return gram;
}

BigInt minor_gcd(const LatticeBasis& basis) {
  if (basis.rank() == 0) return 1;  // zero lattice: empty determinant
  require_rank(basis);
  if (basis.rank() > basis.ambient_dim) throw DomainError("rank exceeds ambient dimension");
  BigInt g = 0;
  for_each_maximal_minor(to_big(basis), basis.ambient_dim, [&](const BigInt& det) { g = gcd(g, abs(det)); });
  if (g == 0) throw DomainError("basis vectors are linearly dependent");
  return g;
}

LatticeBasis canonical_form(const LatticeBasis& basis) {
  if (basis.rank() == 0) return {basis.ambient_dim, {}};
  require_rank(basis);
  return from_big(basis.ambient_dim, hermite(to_big(basis), basis.ambient_dim));
}

bool same_lattice(const LatticeBasis& a, const LatticeBasis& b) {
  return a.ambient_dim == b.ambient_dim && canonical_form(a) == canonical_form(b);
}

LatticeBasis dual_lattice(const LatticeBasis& basis) {
  const std::size_t n = basis.ambient_dim;
  const std::size_t r = basis.rank();
  if (r == 0) {
    LatticeBasis all{n, {}};
    for (std::size_t i = 0; i < n; ++i) {
      IntVector e(n, 0);
      e[i] = 1;
      all.vectors.push_back(std::move(e));
    }
    return all;
  }
  require_rank(basis);
  // Row i of [B^T | I_n]; unimodular row operations clearing the B^T block
  // leave kernel vectors of B in the identity block.
  Matrix aug(n, Row(r + n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) aug[i][j] = basis.vectors[j][i];
    aug[i][r + i] = 1;
  }
  const std::size_t rank = echelonize(aug, r);
  if (rank != r) throw DomainError("basis vectors are linearly dependent");
  Matrix kernel;
  for (std::size_t i = rank; i < n; ++i) kernel.emplace_back(aug[i].begin() + static_cast<std::ptrdiff_t>(r), aug[i].end());
  if (kernel.empty()) return {n, {}};
  return from_big(n, hermite(std::move(kernel), n));
}

LatticeBasis coefficient_lattice(std::span<const std::int64_t> x, unsigned k) {
  if (std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; })) {
    throw DomainError("coefficient lattice needs a nonzero solution vector");
  }
  IntVector powers(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) powers[j] = arith::checked_pow(x[j], k);
  return dual_lattice(LatticeBasis{x.size(), {powers}});
}

std::vector<IntVector> enumerate_box(const LatticeBasis& basis, std::int64_t A, std::size_t cap) {
  if (A < 0) throw DomainError("box bound must be nonnegative");
  const Echelon e = basis.rank() == 0 ? Echelon{} : echelon_int64(basis);
  std::vector<IntVector> out;
  walk_box(e, basis.ambient_dim, A, [&](const IntVector& p) {
    if (out.size() >= cap) {
      throw ResourceError("enumerate_box exceeded the cap of " + std::to_string(cap) + " points");
    }
    out.push_back(p);
  });
  return out;
}

std::uint64_t count_box(const LatticeBasis& basis, std::int64_t A, std::uint64_t cap) {
  if (A < 0) throw DomainError("box bound must be nonnegative");
  const Echelon e = basis.rank() == 0 ? Echelon{} : echelon_int64(basis);
  std::uint64_t count = 0;
  walk_box(e, basis.ambient_dim, A, [&](const IntVector&) {
    if (++count > cap) throw ResourceError("count_box exceeded the cap of " + std::to_string(cap) + " points");
  });
  return count;
}

bool contains(const LatticeBasis& basis, std::span<const std::int64_t> v) {
  if (v.size() != basis.ambient_dim) throw DomainError("vector length differs from ambient dimension");
  if (basis.rank() == 0) return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
  std::vector<std::size_t> pivots;
  Matrix h = hermite(to_big(basis), basis.ambient_dim, &pivots);
  Row rest(v.begin(), v.end());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::size_t c = pivots[i];
    if (rest[c] % h[i][c] != 0) return false;
    BigInt q = rest[c] / h[i][c];
    for (std::size_t j = 0; j < rest.size(); ++j) rest[j] -= q * h[i][j];
  }
  return std::all_of(rest.begin(), rest.end(), [](const BigInt& x) { return x == 0; });
}

}  // namespace dioph::lattice
