#include "lo237/numerics/number_field.hpp"

#include <cassert>
#include <sstream>

namespace lo237::num {

// ---------------------------------------------------------------------------
// FieldElem
// ---------------------------------------------------------------------------

FieldElem::FieldElem(FieldPtr field, std::vector<Rational> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  assert(field_ && coords_.size() == field_->dim());
}

FieldElem FieldElem::from_rational(const FieldPtr& field, const Rational& q) {
  std::vector<Rational> c(field->dim(), Rational(0));
  c[0] = canonical(q);
  return FieldElem(field, std::move(c));
}

bool FieldElem::is_zero() const {
  for (const auto& c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

std::optional<Rational> FieldElem::as_rational() const {
  for (size_t i = 1; i < coords_.size(); ++i) {
    if (coords_[i] != 0) return std::nullopt;
  }
  return coords_[0];
}

bool FieldElem::operator==(const FieldElem& rhs) const {
  assert(field_ == rhs.field_);
  return coords_ == rhs.coords_;
}

FieldElem FieldElem::operator+(const FieldElem& rhs) const {
  assert(field_ == rhs.field_);
  std::vector<Rational> c(coords_);
  for (size_t i = 0; i < c.size(); ++i) c[i] += rhs.coords_[i];
  return FieldElem(field_, std::move(c));
}

FieldElem FieldElem::operator-(const FieldElem& rhs) const {
  assert(field_ == rhs.field_);
  std::vector<Rational> c(coords_);
  for (size_t i = 0; i < c.size(); ++i) c[i] -= rhs.coords_[i];
  return FieldElem(field_, std::move(c));
}

FieldElem FieldElem::operator*(const FieldElem& rhs) const {
  assert(field_ == rhs.field_);
  return FieldElem(field_, field_->mul_vec(coords_, rhs.coords_));
}

FieldElem FieldElem::operator-() const {
  std::vector<Rational> c(coords_);
  for (auto& x : c) x = -x;
  return FieldElem(field_, std::move(c));
}

FieldElem FieldElem::scaled(const Rational& q) const {
  std::vector<Rational> c(coords_);
  for (auto& x : c) x *= q;
  return FieldElem(field_, std::move(c));
}

FieldElem FieldElem::inverse() const {
  const size_t n = field_->dim();
  if (is_zero()) throw std::domain_error("FieldElem::inverse of zero");
  // Solve M v = e_0 where M is the multiplication-by-*this matrix.
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, Rational(0)));
  for (size_t j = 0; j < n; ++j) {
    std::vector<Rational> ej(n, Rational(0));
    ej[j] = 1;
    std::vector<Rational> col = field_->mul_vec(coords_, ej);
    for (size_t i = 0; i < n; ++i) m[i][j] = col[i];
  }
  m[0][n] = 1;  // rhs: coordinates of 1
  // Exact Gaussian elimination.
  size_t row = 0;
  std::vector<size_t> pivot_col(n, 0);
  for (size_t col = 0; col < n && row < n; ++col) {
    size_t p = row;
    while (p < n && m[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[row]);
    const Rational inv_pivot = 1 / m[row][col];
    for (size_t j = col; j <= n; ++j) m[row][j] *= inv_pivot;
    for (size_t i = 0; i < n; ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational f = m[i][col];
      for (size_t j = col; j <= n; ++j) m[i][j] -= f * m[row][j];
    }
    pivot_col[row] = col;
    ++row;
  }
  if (row < n) {
    throw std::domain_error("FieldElem::inverse: zero divisor (tower not a field?)");
  }
  std::vector<Rational> v(n, Rational(0));
  for (size_t i = 0; i < n; ++i) v[pivot_col[i]] = m[i][n];
  return FieldElem(field_, std::move(v));
}

int FieldElem::certified_sign(unsigned max_bits) const {
  if (is_zero()) return 0;
  const bool guaranteed = field_->zero_test_valid();
  const unsigned cap = guaranteed ? (1u << 22) : max_bits;
  for (mpfr_prec_t p = 64; static_cast<unsigned>(p) <= cap; p *= 2) {
    auto s = enclosure(p).sign();
    if (s.has_value() && *s != 0) return *s;
  }
  if (guaranteed) {
    throw std::logic_error("certified_sign: nonzero element failed to separate");
  }
  throw PrecisionExhausted(
      "certified_sign: cannot certify sign of a possibly-zero element in a "
      "tower without a verified irreducibility certificate");
}

Interval FieldElem::enclosure(mpfr_prec_t prec) const {
  const auto& basis = field_->basis_enclosures(prec + 16);
  Interval acc = Interval::from_rational(Rational(0), prec);
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    acc = acc + Interval::from_rational(coords_[i], prec + 16) * basis[i];
  }
  return acc;
}

std::string FieldElem::to_string() const {
  // Monomial names along the tower, lowest level first.
  std::vector<std::string> names;
  const NumberField* f = field_.get();
  std::vector<std::pair<std::string, size_t>> levels;  // (gen name, rel degree)
  while (f && !f->is_rationals()) {
    levels.emplace_back(f->gen_name(), f->dim() / f->base()->dim());
    f = f->base().get();
  }
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << coords_[i].get_str();
    // Decode the monomial exponents from the flat index.
    size_t idx = i;
    std::vector<size_t> exps(levels.size(), 0);
    size_t block = field_->dim();
    for (size_t l = 0; l < levels.size(); ++l) {
      block /= levels[l].second;
      exps[l] = idx / block;
      idx %= block;
    }
    for (size_t l = 0; l < levels.size(); ++l) {
      if (exps[l] == 0) continue;
      os << "*" << levels[l].first;
      if (exps[l] > 1) os << "^" << exps[l];
    }
  }
  if (first) os << "0";
  return os.str();
}

std::string FieldElem::key_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << ',';
    os << coords_[i].get_str();
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// NumberField
// ---------------------------------------------------------------------------

FieldPtr NumberField::rationals() {
  static FieldPtr q = [] {
    auto f = std::shared_ptr<NumberField>(new NumberField());
    f->gen_name_ = "1";
    f->dim_ = 1;
    f->rel_degree_ = 1;
    f->zero_test_valid_ = true;
    f->table_ = {{Rational(1)}};
    f->root_lo_ = 1;
    f->root_hi_ = 1;
    return f;
  }();
  return q;
}

FieldElem NumberField::zero() const {
  return FieldElem::from_rational(shared_from_this(), Rational(0));
}

FieldElem NumberField::one() const {
  return FieldElem::from_rational(shared_from_this(), Rational(1));
}

FieldElem NumberField::generator() const {
  std::vector<Rational> c(dim_, Rational(0));
  if (is_rationals()) {
    c[0] = 1;
  } else {
    c[base_->dim()] = 1;  // theta^1 * 1
  }
  return FieldElem(shared_from_this(), std::move(c));
}

FieldElem NumberField::lift(const FieldElem& x) const {
  assert(x.field().get() == base_.get());
  std::vector<Rational> c(dim_, Rational(0));
  for (size_t i = 0; i < base_->dim(); ++i) c[i] = x.coords()[i];
  return FieldElem(shared_from_this(), std::move(c));
}

namespace {

// Evaluate a monic polynomial y^d + tail[d-1] y^{d-1} + ... + tail[0]
// (coefficients in the coefficient field) at a rational point.
FieldElem eval_monic_at_rational(const std::vector<FieldElem>& tail, const Rational& m,
                                 const FieldPtr& coeff_field) {
  FieldElem acc = coeff_field->one();
  for (size_t s = tail.size(); s-- > 0;) {
    acc = acc.scaled(m) + tail[s];
  }
  return acc;
}

// Evaluate a vector of rational coordinates (a polynomial in the base
// generator) over an interval enclosure of that generator.
Interval eval_coords_over_interval(const std::vector<Rational>& coords,
                                   const Interval& t, mpfr_prec_t prec) {
  Interval acc = Interval::from_rational(Rational(0), prec);
  for (size_t k = coords.size(); k-- > 0;) {
    acc = acc * t + Interval::from_rational(coords[k], prec);
  }
  return acc;
}

}  // namespace

FieldPtr NumberField::extend(const std::string& gen_name, std::vector<FieldElem> tail,
                             const Rational& root_lo, const Rational& root_hi,
                             const std::optional<ConjugateWitness>& witness) const {
  if (tail.empty()) throw std::invalid_argument("extend: degree must be >= 1");
  for (const auto& t : tail) {
    if (t.field().get() != this) {
      throw std::invalid_argument("extend: coefficients must lie in the base field");
    }
  }
  auto f = std::shared_ptr<NumberField>(new NumberField());
  f->base_ = shared_from_this();
  f->gen_name_ = gen_name;
  f->rel_degree_ = tail.size();
  f->dim_ = dim_ * tail.size();
  f->poly_tail_.reserve(tail.size());
  for (const auto& t : tail) f->poly_tail_.push_back(t.coords());
  f->root_lo_ = root_lo;
  f->root_hi_ = root_hi;

  // Certified sign change at the isolating interval's endpoints.
  FieldElem at_lo = eval_monic_at_rational(tail, root_lo, shared_from_this());
  FieldElem at_hi = eval_monic_at_rational(tail, root_hi, shared_from_this());
  const int s_lo = at_lo.certified_sign();
  const int s_hi = at_hi.certified_sign();
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) {
    throw std::invalid_argument("extend: endpoints do not certify a sign change");
  }
  f->sign_at_lo_ = s_lo;

  // Irreducibility bookkeeping, which is what validates the exact zero test
  // (zero coordinate vector <=> zero element).
  bool irreducible = false;
  if (is_rationals() && tail.size() <= 3) {
    // Degree <= 3 over Q: reducible iff there is a rational root. For a monic
    // integer polynomial any rational root is an integer dividing the
    // constant term; we only accept integral tails here.
    bool integral = true;
    std::vector<Integer> zt;
    for (const auto& t : tail) {
      Rational c = *t.as_rational();
      if (c.get_den() != 1) integral = false;
      zt.push_back(c.get_num());
    }
    if (integral && zt[0] != 0) {
      irreducible = true;
      Integer c0 = zt[0] > 0 ? zt[0] : Integer(-zt[0]);
      for (Integer div = 1; div <= c0; ++div) {
        if (c0 % div != 0) continue;
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          Rational r(sgn > 0 ? div : Integer(-div));
          if (!eval_monic_at_rational(tail, r, shared_from_this()).is_zero()) continue;
          irreducible = false;
        }
      }
    }
  } else if (witness.has_value()) {
    // Quadratic y^2 - d over a simple extension Q(t): if d is negative under
    // some other real embedding t -> t', it is not a square, hence the
    // quadratic is irreducible.
    if (tail.size() != 2 || !tail[1].is_zero() || !base_ || !base_->is_rationals()) {
      throw std::invalid_argument("extend: witness only supported for y^2 - d over Q(t)");
    }
    // This field's generator has a minimal polynomial with rational
    // coefficients; the witness interval isolates one of its other roots.
    std::vector<Rational> base_poly;  // low to high, monic implied
    for (const auto& c : poly_tail_) base_poly.push_back(c[0]);
    auto eval_base_poly = [&](const Rational& m) {
      Rational acc(1);
      for (size_t s = base_poly.size(); s-- > 0;) acc = acc * m + base_poly[s];
      return acc;
    };
    Rational wlo = witness->lo, whi = witness->hi;
    const int ws_lo = sgn(eval_base_poly(wlo));
    const int ws_hi = sgn(eval_base_poly(whi));
    if (ws_lo == 0 || ws_hi == 0 || ws_lo == ws_hi) {
      throw std::invalid_argument("extend: witness interval has no certified sign change");
    }
    const std::vector<Rational>& d_coords_neg = f->poly_tail_[0];  // -d
    for (int iter = 0; iter < 512 && !irreducible; ++iter) {
      Interval t_enc = interval_detail_make(256);
      mpfr_set_q(interval_detail_lo(t_enc), wlo.get_mpq_t(), MPFR_RNDD);
      mpfr_set_q(interval_detail_hi(t_enc), whi.get_mpq_t(), MPFR_RNDU);
      Interval val = eval_coords_over_interval(d_coords_neg, t_enc, 256);
      auto s = val.sign();
      if (s.has_value() && *s > 0) {  // -d > 0 at the conjugate root
        irreducible = true;
        break;
      }
      Rational mid = (wlo + whi) / 2;
      const int ms = sgn(eval_base_poly(mid));
      if (ms == 0) break;  // witness hit a rational root: give up on the proof
      if (ms == ws_lo) {
        wlo = mid;
      } else {
        whi = mid;
      }
    }
    if (!irreducible) {
      throw std::invalid_argument("extend: witness failed to certify d < 0 at conjugate");
    }
  }
  f->zero_test_valid_ = zero_test_valid_ && irreducible;

  f->build_table();
  return f;
}

void NumberField::build_table() {
  const size_t n = base_->dim_;
  const size_t d = rel_degree_;
  const size_t N = dim_;

  // theta^k over the new basis, for k = 0 .. 2d-2.
  std::vector<std::vector<Rational>> powers(2 * d - 1, std::vector<Rational>(N, Rational(0)));
  for (size_t k = 0; k < d; ++k) powers[k][k * n] = 1;
  if (d >= 2) {
    for (size_t s = 0; s < d; ++s) {
      for (size_t i = 0; i < n; ++i) powers[d][s * n + i] = -poly_tail_[s][i];
    }
    for (size_t k = d; k + 1 <= 2 * d - 2; ++k) {
      std::vector<Rational> next(N, Rational(0));
      // Shift all blocks up one power; the top block overflows into theta^d.
      std::vector<Rational> top(n);
      for (size_t i = 0; i < n; ++i) top[i] = powers[k][(d - 1) * n + i];
      for (size_t s = d - 1; s-- > 0;) {
        for (size_t i = 0; i < n; ++i) next[(s + 1) * n + i] = powers[k][s * n + i];
      }
      bool top_zero = true;
      for (const auto& x : top) {
        if (x != 0) top_zero = false;
      }
      if (!top_zero) {
        for (size_t r = 0; r < d; ++r) {
          std::vector<Rational> block(n);
          for (size_t i = 0; i < n; ++i) block[i] = powers[d][r * n + i];
          std::vector<Rational> prod = base_->mul_vec(top, block);
          for (size_t i = 0; i < n; ++i) next[r * n + i] += prod[i];
        }
      }
      powers[k + 1] = std::move(next);
    }
  }

  table_.assign(N * N, {});
  for (size_t s = 0; s < d; ++s) {
    for (size_t bi = 0; bi < n; ++bi) {
      for (size_t t = 0; t < d; ++t) {
        for (size_t bj = 0; bj < n; ++bj) {
          const std::vector<Rational>& w = base_->table_[bi * n + bj];
          std::vector<Rational> entry(N, Rational(0));
          if (s + t < d) {
            for (size_t i = 0; i < n; ++i) entry[(s + t) * n + i] = w[i];
          } else {
            for (size_t r = 0; r < d; ++r) {
              std::vector<Rational> block(n);
              for (size_t i = 0; i < n; ++i) block[i] = powers[s + t][r * n + i];
              std::vector<Rational> prod = base_->mul_vec(w, block);
              for (size_t i = 0; i < n; ++i) entry[r * n + i] += prod[i];
            }
          }
          table_[(s * n + bi) * N + (t * n + bj)] = std::move(entry);
        }
      }
    }
  }
}

std::vector<Rational> NumberField::mul_vec(const std::vector<Rational>& x,
                                           const std::vector<Rational>& y) const {
  const size_t N = dim_;
  std::vector<Rational> out(N, Rational(0));
  for (size_t i = 0; i < N; ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < N; ++j) {
      if (y[j] == 0) continue;
      const Rational f = x[i] * y[j];
      const std::vector<Rational>& e = table_[i * N + j];
      for (size_t k = 0; k < N; ++k) {
        if (e[k] != 0) out[k] += f * e[k];
      }
    }
  }
  return out;
}

void NumberField::ensure_root_bits(long bits) const {
  if (is_rationals()) return;
  Rational width = root_hi_ - root_lo_;
  Rational target(1);
  target /= (Integer(1) << static_cast<unsigned>(bits));
  std::vector<FieldElem> tail;
  tail.reserve(poly_tail_.size());
  for (const auto& c : poly_tail_) tail.emplace_back(base_, c);
  while (width > target) {
    const Rational mid = (root_lo_ + root_hi_) / 2;
    FieldElem v = eval_monic_at_rational(tail, mid, base_);
    const int s = v.certified_sign();
    if (s == 0) {
      throw std::logic_error("root refinement hit an exact rational root");
    }
    if (s == sign_at_lo_) {
      root_lo_ = mid;
    } else {
      root_hi_ = mid;
    }
    width = root_hi_ - root_lo_;
  }
}

Interval NumberField::root_enclosure(mpfr_prec_t prec) const {
  ensure_root_bits(prec + 2);
  Interval r = interval_detail_make(prec);
  mpfr_set_q(interval_detail_lo(r), root_lo_.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(interval_detail_hi(r), root_hi_.get_mpq_t(), MPFR_RNDU);
  return r;
}

const std::vector<Interval>& NumberField::basis_enclosures(mpfr_prec_t prec) const {
  auto it = basis_cache_.find(prec);
  if (it != basis_cache_.end()) return it->second;

  std::vector<Interval> enc;
  enc.reserve(dim_);
  if (is_rationals()) {
    enc.push_back(Interval::from_rational(Rational(1), prec));
  } else {
    const auto& base_enc = base_->basis_enclosures(prec + 16);
    Interval theta = root_enclosure(prec + 16);
    Interval theta_pow = Interval::from_rational(Rational(1), prec + 16);
    for (size_t s = 0; s < rel_degree_; ++s) {
      for (size_t i = 0; i < base_->dim_; ++i) {
        enc.push_back(base_enc[i] * theta_pow);
      }
      if (s + 1 < rel_degree_) theta_pow = theta_pow * theta;
    }
  }
  // Keep refinement monotone: intersect with the tightest known enclosures.
  if (tightest_basis_.empty()) {
    tightest_basis_ = enc;
  } else {
    for (size_t i = 0; i < dim_; ++i) {
      tightest_basis_[i] = tightest_basis_[i].intersect(enc[i]);
      enc[i] = tightest_basis_[i];
    }
  }
  auto [pos, ok] = basis_cache_.emplace(prec, std::move(enc));
  (void)ok;
  return pos->second;
}

std::string NumberField::describe() const {
  if (is_rationals()) return "Q";
  std::ostringstream os;
  os << base_->describe() << "(" << gen_name_ << ": ";
  os << "y^" << rel_degree_;
  for (size_t s = rel_degree_; s-- > 0;) {
    FieldElem c(base_, poly_tail_[s]);
    if (c.is_zero()) continue;
    os << " + (" << c.to_string() << ")";
    if (s > 0) {
      os << "*y";
      if (s > 1) os << "^" << s;
    }
  }
  os << " = 0, root in [" << root_lo_.get_str() << ", " << root_hi_.get_str() << "]";
  if (!zero_test_valid_) os << ", numeric-only";
  os << ")";
  return os.str();
}

}  // namespace lo237::num
