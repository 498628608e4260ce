#pragma once

// Exact Laurent polynomials and rational functions in one variable v.

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace moltendt {

using Q = mpq_class;

class LPoly {
public:
    LPoly() = default;
    LPoly(long c) { // NOLINT: implicit constant
        if (c != 0) c_.push_back(Q(c));
    }
    LPoly(const Q& c) { // NOLINT
        if (c != 0) c_.push_back(c);
    }

    static LPoly monomial(int e, const Q& c = Q(1)) {
        LPoly p;
        if (c != 0) {
            p.lo_ = e;
            p.c_.push_back(c);
        }
        return p;
    }
    static LPoly v() { return monomial(1); }

    bool is_zero() const { return c_.empty(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    std::size_t size() const { return c_.size(); }

    Q coeff(int e) const {
        if (c_.empty() || e < lo_ || e > hi()) return Q(0);
        return c_[e - lo_];
    }
    const Q& lead() const { return c_.back(); }

    // Visit nonzero terms in increasing exponent.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k] != 0) f(lo_ + static_cast<int>(k), c_[k]);
    }

    bool is_integral() const {
        for (auto& q : c_)
            if (q.get_den() != 1) return false;
        return true;
    }

    LPoly operator-() const {
        LPoly r = *this;
        for (auto& q : r.c_) q = -q;
        return r;
    }
    LPoly& operator+=(const LPoly& o) {
        if (o.is_zero()) return *this;
        if (is_zero()) return *this = o;
        int nlo = std::min(lo_, o.lo_), nhi = std::max(hi(), o.hi());
        if (nlo != lo_ || nhi != hi()) {
            std::vector<Q> nc(nhi - nlo + 1);
            for (std::size_t k = 0; k < c_.size(); ++k) nc[lo_ - nlo + k] = c_[k];
            c_.swap(nc);
            lo_ = nlo;
        }
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[o.lo_ - lo_ + k] += o.c_[k];
        trim();
        return *this;
    }
    LPoly& operator-=(const LPoly& o) { return *this += -o; }
    friend LPoly operator+(LPoly a, const LPoly& b) { return a += b; }
    friend LPoly operator-(LPoly a, const LPoly& b) { return a -= b; }
    friend LPoly operator*(const LPoly& a, const LPoly& b) {
        LPoly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.lo_ = a.lo_ + b.lo_;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Q(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }
    LPoly& operator*=(const LPoly& o) { return *this = *this * o; }
    LPoly& scale(const Q& q) {
        if (q == 0) return *this = LPoly();
        for (auto& x : c_) x *= q;
        return *this;
    }

    LPoly shifted(int k) const {
        LPoly r = *this;
        if (!r.is_zero()) r.lo_ += k;
        return r;
    }
    // v -> v^{-1}
    LPoly bar() const {
        LPoly r;
        if (is_zero()) return r;
        r.c_.assign(c_.rbegin(), c_.rend());
        r.lo_ = -hi();
        return r;
    }
    // v -> v^k, k >= 1
    LPoly subs_power(int k) const {
        LPoly r;
        if (is_zero()) return r;
        r.lo_ = lo_ * k;
        r.c_.assign((c_.size() - 1) * k + 1, Q(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i * k] = c_[i];
        return r;
    }
    Q eval_at_one() const {
        Q s = 0;
        for (auto& q : c_) s += q;
        return s;
    }

    friend bool operator==(const LPoly& a, const LPoly& b) { return a.lo_ == b.lo_ && a.c_ == b.c_; }
    friend bool operator!=(const LPoly& a, const LPoly& b) { return !(a == b); }
    friend bool operator<(const LPoly& a, const LPoly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        if (a.lo_ != b.lo_) return a.lo_ < b.lo_;
        return a.c_ < b.c_;
    }

    // Division with remainder, treating both as ordinary polynomials after shifting to lo = 0.
    // Returns (q, r) with a = q*b + r on the shifted representatives; exponents restored on q.
    static std::pair<LPoly, LPoly> divmod(const LPoly& a, const LPoly& b) {
        assert(!b.is_zero());
        std::vector<Q> r(a.c_);
        const std::size_t nb = b.c_.size();
        if (r.size() < nb) return {LPoly(), a};
        std::vector<Q> q(r.size() - nb + 1);
        const Q& lb = b.c_.back();
        for (std::size_t i = q.size(); i-- > 0;) {
            Q f = r[i + nb - 1] / lb;
            q[i] = f;
            if (f == 0) continue;
            for (std::size_t j = 0; j < nb; ++j) r[i + j] -= f * b.c_[j];
        }
        LPoly qp, rp;
        qp.c_ = std::move(q);
        qp.lo_ = a.lo_ - b.lo_;
        qp.trim();
        rp.c_ = std::move(r);
        rp.lo_ = a.lo_;
        rp.trim();
        return {qp, rp};
    }

    // Monic gcd of the ordinary-polynomial parts (monomial factors ignored), lo = 0.
    static LPoly gcd(LPoly a, LPoly b) {
        a.lo_ = 0;
        b.lo_ = 0;
        while (!b.is_zero()) {
            auto r = divmod(a, b).second;
            r.lo_ = 0;
            r.trim();
            a = std::move(b);
            b = std::move(r);
        }
        if (a.is_zero()) return a;
        a.lo_ = 0;
        a.scale(1 / Q(a.lead()));
        return a;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = c_.size(); k-- > 0;) {
            const Q& q = c_[k];
            if (q == 0) continue;
            int e = lo_ + static_cast<int>(k);
            Q a = abs(q);
            if (!first) os << (q < 0 ? " - " : " + ");
            else if (q < 0) os << "-";
            first = false;
            if (a != 1 || e == 0) os << a.get_str();
            if (e != 0) {
                if (a != 1) os << "*";
                os << "v";
                if (e != 1) os << "^" << e;
            }
        }
        return os.str();
    }

private:
    void trim() {
        std::size_t b = 0;
        while (b < c_.size() && c_[b] == 0) ++b;
        if (b == c_.size()) {
            c_.clear();
            lo_ = 0;
            return;
        }
        std::size_t e = c_.size();
        while (c_[e - 1] == 0) --e;
        if (b != 0 || e != c_.size()) c_ = std::vector<Q>(c_.begin() + b, c_.begin() + e);
        lo_ += static_cast<int>(b);
    }

    int lo_ = 0;
    std::vector<Q> c_;
};

inline std::ostream& operator<<(std::ostream& os, const LPoly& p) { return os << p.str(); }

// Reduced fraction num/den; den is monic with nonzero constant term, so den == 1 iff Laurent.
class VRational {
public:
    VRational() = default;
    VRational(long c) : num_(c) {} // NOLINT
    VRational(const LPoly& p) : num_(p) {} // NOLINT
    VRational(LPoly n, LPoly d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero()) throw invariant_error("DivisionByZero", "zero denominator");
        normalize();
    }

    const LPoly& num() const { return num_; }
    const LPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_ == LPoly(1); }
    bool is_integral_laurent() const { return is_laurent() && num_.is_integral(); }

    VRational operator-() const {
        VRational r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend VRational operator+(const VRational& a, const VRational& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            VRational r;
            r.num_ = a.num_ + b.num_;
            r.den_ = a.den_;
            if (!r.is_laurent()) r.normalize();
            return r;
        }
        return VRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend VRational operator-(const VRational& a, const VRational& b) { return a + (-b); }
    friend VRational operator*(const VRational& a, const VRational& b) {
        if (a.is_zero() || b.is_zero()) return VRational();
        if (a.is_laurent() && b.is_laurent()) return VRational(a.num_ * b.num_);
        return VRational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend VRational operator/(const VRational& a, const VRational& b) {
        if (b.is_zero()) throw invariant_error("DivisionByZero", "division by zero rational function");
        return VRational(a.num_ * b.den_, a.den_ * b.num_);
    }
    VRational& operator+=(const VRational& o) { return *this = *this + o; }
    VRational& operator-=(const VRational& o) { return *this = *this - o; }
    VRational& operator*=(const VRational& o) { return *this = *this * o; }

    VRational times_monomial(int e, const Q& c = Q(1)) const {
        VRational r = *this;
        r.num_ = r.num_.shifted(e);
        r.num_.scale(c);
        return r;
    }
    VRational bar() const { return VRational(num_.bar(), den_.bar()); }
    VRational subs_power(int k) const {
        if (k == 1) return *this;
        return VRational(num_.subs_power(k), den_.subs_power(k));
    }

    friend bool operator==(const VRational& a, const VRational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const VRational& a, const VRational& b) { return !(a == b); }

    std::string str() const {
        if (is_laurent()) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    void normalize() {
        if (num_.is_zero()) {
            den_ = LPoly(1);
            return;
        }
        // pull the monomial factor of den into num
        int s = den_.lo();
        den_ = den_.shifted(-s);
        num_ = num_.shifted(-s);
        LPoly g = LPoly::gcd(num_, den_);
        if (g.size() > 1) {
            num_ = LPoly::divmod(num_, g).first;
            den_ = LPoly::divmod(den_, g).first;
        }
        Q l = den_.lead();
        if (l != 1) {
            num_.scale(1 / l);
            den_.scale(1 / l);
        }
    }

    LPoly num_;
    LPoly den_{1};
};

inline std::ostream& operator<<(std::ostream& os, const VRational& r) { return os << r.str(); }

// v - v^{-1}
inline LPoly v_minus_vinv() { return LPoly::monomial(1) - LPoly::monomial(-1); }

// v^k - v^{-k}
inline LPoly quantum_gap(int k) { return LPoly::monomial(k) - LPoly::monomial(-k); }

// Convert a polynomial in L^{1/2} (map exponent of L^{1/2} -> coefficient) into v = -L^{1/2}.
inline LPoly from_sqrtL(const std::map<int, long>& terms) {
    LPoly p;
    for (auto [e, c] : terms) p += LPoly::monomial(e, Q((e % 2 == 0) ? c : -c));
    return p;
}

} // namespace moltendt
