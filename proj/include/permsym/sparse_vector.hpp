#pragma once

#include "permsym/rational.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace permsym {

// Sparse coefficients over an ordered key set, tied to an atom count N.
// Keys are checked with fits(key, N) found by ADL. Exact zeros are never stored.
template <class Key, class S>
class SparseVector {
public:
  using key_type = Key;
  using scalar_type = S;
  using map_type = std::map<Key, S>;

  SparseVector() = default;
  explicit SparseVector(int atoms) : atoms_(atoms) {}
  SparseVector(int atoms, const Key& k, S value) : atoms_(atoms) { add(k, std::move(value)); }

  int atoms() const { return atoms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const map_type& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  S coeff(const Key& k) const
  {
    auto it = terms_.find(k);
    return it == terms_.end() ? S(0) : it->second;
  }
  bool contains(const Key& k) const { return terms_.count(k) != 0; }

  void add(const Key& k, const S& value)
  {
    if (!fits(k, atoms_)) throw std::logic_error("sparse vector key does not match atom count");
    if (is_zero(value)) return;
    auto [it, inserted] = terms_.try_emplace(k, value);
    if (!inserted) {
      it->second += value;
      if (is_zero(it->second)) terms_.erase(it);
    }
  }
  void set(const Key& k, const S& value)
  {
    if (!fits(k, atoms_)) throw std::logic_error("sparse vector key does not match atom count");
    if (is_zero(value))
      terms_.erase(k);
    else
      terms_[k] = value;
  }

  SparseVector& operator+=(const SparseVector& o)
  {
    check_same(o);
    for (const auto& [k, v] : o.terms_) add(k, v);
    return *this;
  }
  SparseVector& operator-=(const SparseVector& o)
  {
    check_same(o);
    for (const auto& [k, v] : o.terms_) add(k, -v);
    return *this;
  }
  SparseVector& operator*=(const S& s)
  {
    if (is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= s;
    return *this;
  }
  friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
  friend SparseVector operator*(SparseVector a, const S& s) { return a *= s; }
  friend SparseVector operator*(const S& s, SparseVector a) { return a *= s; }
  friend bool operator==(const SparseVector& a, const SparseVector& b)
  {
    return a.atoms_ == b.atoms_ && a.terms_ == b.terms_;
  }

  // axpy without temporaries
  void add_scaled(const SparseVector& o, const S& s)
  {
    check_same(o);
    if (is_zero(s)) return;
    for (const auto& [k, v] : o.terms_) add(k, v * s);
  }

  template <class T>
  SparseVector<Key, T> cast() const
  {
    SparseVector<Key, T> r(atoms_);
    for (const auto& [k, v] : terms_) r.add(k, scalar_cast<T>(v));
    return r;
  }

private:
  void check_same(const SparseVector& o) const
  {
    if (o.atoms_ != atoms_) throw std::invalid_argument("sparse vectors over different atom counts");
  }

  int atoms_ = 0;
  map_type terms_;
};

}  // namespace permsym
