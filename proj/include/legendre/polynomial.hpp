#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace legendre {

// Sparse multivariate polynomial with exponent-vector keys. The ordered map
// keeps iteration (and therefore every derived quantity) deterministic.
template <class Scalar>
class BasicPolynomial {
 public:
  using Exponents = std::vector<int>;

  BasicPolynomial() = default;
  explicit BasicPolynomial(std::size_t nvars) : nvars_(nvars) {}

  static BasicPolynomial constant(std::size_t nvars, Scalar c) {
    BasicPolynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
  }

  static BasicPolynomial variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw std::out_of_range("polynomial variable index");
    Exponents e(nvars, 0);
    e[index] = 1;
    BasicPolynomial p(nvars);
    p.add_term(e, Scalar(1));
    return p;
  }

  static BasicPolynomial monomial(Exponents e, Scalar c) {
    BasicPolynomial p(e.size());
    p.add_term(std::move(e), c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponents, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Exponents e, Scalar c) {
    if (e.size() != nvars_) throw std::invalid_argument("exponent vector has wrong length");
    for (int p : e)
      if (p < 0) throw std::invalid_argument("negative exponent");
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  Scalar coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  template <class Arg>
  auto operator()(std::span<const Arg> point) const {
    using Result = decltype(Scalar(1) * Arg(1));
    if (point.size() != nvars_) throw std::invalid_argument("polynomial evaluated at point of wrong dimension");
    Result sum(0);
    for (const auto& [e, c] : terms_) {
      Result t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (int p = 0; p < e[i]; ++p) t *= point[i];
      sum += t;
    }
    return sum;
  }

  auto operator()(std::initializer_list<double> point) const {
    std::vector<double> v(point);
    return (*this)(std::span<const double>(v));
  }

  auto operator()(const std::vector<double>& point) const { return (*this)(std::span<const double>(point)); }

  BasicPolynomial derivative(std::size_t var) const {
    if (var >= nvars_) throw std::out_of_range("derivative variable index");
    BasicPolynomial d(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents de = e;
      de[var] -= 1;
      d.add_term(std::move(de), c * Scalar(e[var]));
    }
    return d;
  }

  int degree_in(std::size_t var) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int p : e) s += p;
      d = std::max(d, s);
    }
    return d;
  }

  // Coefficient polynomial of var^power (var removed from nothing; its exponent becomes 0).
  BasicPolynomial coefficient_of(std::size_t var, int power) const {
    BasicPolynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] != power) continue;
      Exponents r = e;
      r[var] = 0;
      out.add_term(std::move(r), c);
    }
    return out;
  }

  // Re-index into a polynomial of `new_nvars` variables; variable i goes to slot map[i].
  BasicPolynomial embed(std::size_t new_nvars, const std::vector<std::size_t>& map) const {
    if (map.size() != nvars_) throw std::invalid_argument("embedding map has wrong length");
    BasicPolynomial out(new_nvars);
    for (const auto& [e, c] : terms_) {
      Exponents ne(new_nvars, 0);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (map[i] >= new_nvars) throw std::out_of_range("embedding target index");
        ne[map[i]] += e[i];
      }
      out.add_term(std::move(ne), c);
    }
    return out;
  }

  // Substitute variable i by subs[i]; all substitutes share one variable space.
  template <class S2>
  BasicPolynomial<S2> compose(const std::vector<BasicPolynomial<S2>>& subs) const {
    if (subs.size() != nvars_) throw std::invalid_argument("composition needs one substitute per variable");
    std::size_t target = subs.empty() ? 0 : subs.front().nvars();
    for (const auto& s : subs)
      if (s.nvars() != target) throw std::invalid_argument("substitutes live in different variable spaces");
    BasicPolynomial<S2> out(target);
    for (const auto& [e, c] : terms_) {
      auto term = BasicPolynomial<S2>::constant(target, S2(c));
      for (std::size_t i = 0; i < nvars_; ++i)
        for (int p = 0; p < e[i]; ++p) term = term * subs[i];
      out += term;
    }
    return out;
  }

  template <class S2>
  BasicPolynomial<S2> cast() const {
    BasicPolynomial<S2> out(nvars_);
    for (const auto& [e, c] : terms_) out.add_term(e, S2(c));
    return out;
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  BasicPolynomial& operator*=(Scalar s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator-(BasicPolynomial a) { return a *= Scalar(-1); }
  friend BasicPolynomial operator*(BasicPolynomial a, Scalar s) { return a *= s; }
  friend BasicPolynomial operator*(Scalar s, BasicPolynomial a) { return a *= s; }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    a.check_same(b);
    BasicPolynomial out(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.nvars_);
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(std::move(e), ca * cb);
      }
    return out;
  }

  friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_same(const BasicPolynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomials over different variable counts");
  }

  std::size_t nvars_ = 0;
  std::map<Exponents, Scalar> terms_;
};

using Polynomial = BasicPolynomial<double>;
using CPolynomial = BasicPolynomial<std::complex<double>>;

}  // namespace legendre
