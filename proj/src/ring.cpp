#include "dmflag/ring.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace dmflag {

namespace {

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

std::int32_t checked_exp(std::int64_t v) {
    if (v < 0 || v > std::numeric_limits<std::int32_t>::max())
        throw RingError("exponent overflow");
    return static_cast<std::int32_t>(v);
}

}  // namespace

Field Field::prime(std::uint32_t p) {
    if (!is_prime(p)) throw RingError("characteristic " + std::to_string(p) + " is not prime");
    return Field(p);
}

mpq_class Field::reduce(const mpq_class& v) const {
    if (p_ == 0) return v;
    mpz_class num = v.get_num(), den = v.get_den(), p = p_;
    mpz_class n = num % p;
    if (n < 0) n += p;
    if (den != 1) {
        mpz_class d = den % p, dinv;
        if (d == 0) throw RingError("denominator divisible by the characteristic");
        mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
        n = (n * dinv) % p;
    }
    return mpq_class(n);
}

mpq_class Field::from_int(long v) const { return reduce(mpq_class(v)); }
mpq_class Field::from_rational(const mpq_class& v) const { return reduce(v); }

mpq_class Field::add(const mpq_class& a, const mpq_class& b) const {
    if (p_ == 0) return a + b;
    mpz_class s = a.get_num() + b.get_num();
    if (s >= p_) s -= p_;
    return mpq_class(s);
}

mpq_class Field::sub(const mpq_class& a, const mpq_class& b) const {
    if (p_ == 0) return a - b;
    mpz_class s = a.get_num() - b.get_num();
    if (s < 0) s += p_;
    return mpq_class(s);
}

mpq_class Field::mul(const mpq_class& a, const mpq_class& b) const {
    if (p_ == 0) return a * b;
    mpz_class s = (a.get_num() * b.get_num()) % p_;
    return mpq_class(s);
}

mpq_class Field::neg(const mpq_class& a) const {
    if (p_ == 0) return -a;
    if (a == 0) return a;
    return mpq_class(mpz_class(p_) - a.get_num());
}

mpq_class Field::inv(const mpq_class& a) const {
    if (a == 0) throw RingError("division by zero");
    if (p_ == 0) return 1 / a;
    mpz_class r, p = p_;
    mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), p.get_mpz_t());
    return mpq_class(r);
}

mpq_class Field::pow(mpq_class a, unsigned long e) const {
    mpq_class r = from_int(1);
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::string Field::to_string(const mpq_class& a) const {
    if (p_ == 0) return a.get_str();
    mpz_class v = a.get_num();
    if (p_ > 2 && v > p_ / 2) v -= p_;
    return v.get_str();
}

bool Mono::divides(const Mono& o, int nvars) const {
    if (deg > o.deg) return false;
    for (int i = 0; i < nvars; ++i)
        if (e[i] > o.e[i]) return false;
    return true;
}

Mono Mono::operator*(const Mono& o) const {
    Mono r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = checked_exp(std::int64_t(e[i]) + o.e[i]);
    r.deg = checked_exp(std::int64_t(deg) + o.deg);
    return r;
}

Mono Mono::quo(const Mono& o) const {
    Mono r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = e[i] - o.e[i];
    r.deg = deg - o.deg;
    return r;
}

Mono Mono::lcm(const Mono& o, int nvars) const {
    Mono r;
    for (int i = 0; i < nvars; ++i) {
        r.e[i] = std::max(e[i], o.e[i]);
        r.deg += r.e[i];
    }
    return r;
}

bool Mono::coprime(const Mono& o, int nvars) const {
    for (int i = 0; i < nvars; ++i)
        if (e[i] && o.e[i]) return false;
    return true;
}

Ring::Ring(Field field, int nvars, MonoOrder order, std::vector<std::string> names)
    : field_(field), nvars_(nvars), order_(order), names_(std::move(names)) {
    if (nvars < 0 || nvars > kMaxVars) throw RingError("unsupported number of variables");
    if (names_.empty())
        for (int i = 0; i < nvars; ++i) names_.push_back("x" + std::to_string(i));
    if (static_cast<int>(names_.size()) != nvars) throw RingError("variable name count mismatch");
}

int Ring::cmp(const Mono& a, const Mono& b) const {
    if (order_ == MonoOrder::grevlex) {
        if (a.deg != b.deg) return a.deg > b.deg ? 1 : -1;
        for (int i = nvars_ - 1; i >= 0; --i)
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
        return 0;
    }
    for (int i = 0; i < nvars_; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
    return 0;
}

RingPtr make_ring(Field field, int nvars, MonoOrder order, std::vector<std::string> names) {
    return std::make_shared<const Ring>(field, nvars, order, std::move(names));
}

Poly Poly::constant(RingPtr ring, const mpq_class& c) {
    return monomial(std::move(ring), Mono{}, c);
}

Poly Poly::var(RingPtr ring, int i, int power) {
    if (i < 0 || i >= ring->nvars()) throw RingError("variable index out of range");
    Mono m;
    m.e[i] = checked_exp(power);
    m.deg = m.e[i];
    return monomial(std::move(ring), m, mpq_class(1));
}

Poly Poly::monomial(RingPtr ring, const Mono& m, const mpq_class& c) {
    Poly r(ring);
    mpq_class v = ring->field().from_rational(c);
    if (v != 0) r.terms_.push_back({m, v});
    return r;
}

Poly Poly::from_terms(RingPtr ring, std::vector<Term> terms) {
    const Ring& R = *ring;
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return R.cmp(a.m, b.m) > 0; });
    Poly r(ring);
    for (auto& t : terms) {
        if (!r.terms_.empty() && r.terms_.back().m == t.m)
            r.terms_.back().c = R.field().add(r.terms_.back().c, t.c);
        else
            r.terms_.push_back(std::move(t));
        if (r.terms_.back().c == 0) r.terms_.pop_back();
    }
    return r;
}

void Poly::check_ring(const Poly& o) const {
    if (!ring_ || !o.ring_ || (ring_ != o.ring_ && !ring_->same_as(*o.ring_)))
        throw RingError("ring mismatch");
}

mpq_class Poly::constant_term() const {
    if (!terms_.empty() && terms_.back().m.is_one()) return terms_.back().c;
    return 0;
}

std::optional<int> Poly::degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, int(t.m.deg));
    return d;
}

bool Poly::is_homogeneous() const {
    for (const auto& t : terms_)
        if (t.m.deg != terms_.front().m.deg) return false;
    return true;
}

Poly Poly::operator+(const Poly& o) const {
    check_ring(o);
    const Ring& R = *ring_;
    Poly r(ring_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        int c = i == terms_.size() ? -1 : j == o.terms_.size() ? 1 : R.cmp(terms_[i].m, o.terms_[j].m);
        if (c > 0) {
            r.terms_.push_back(terms_[i++]);
        } else if (c < 0) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            mpq_class s = R.field().add(terms_[i].c, o.terms_[j].c);
            if (s != 0) r.terms_.push_back({terms_[i].m, s});
            ++i, ++j;
        }
    }
    return r;
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& t : r.terms_) t.c = field().neg(t.c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::scale(const mpq_class& c) const {
    Poly r(ring_);
    mpq_class v = field().from_rational(c);
    if (v == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.m, field().mul(t.c, v)});
    return r;
}

Poly Poly::mul_term(const Mono& m, const mpq_class& c) const {
    Poly r(ring_);
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.m * m, field().mul(t.c, c)});
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_ring(o);
    if (is_zero() || o.is_zero()) return Poly(ring_);
    if (o.terms_.size() == 1) return mul_term(o.terms_[0].m, o.terms_[0].c);
    if (terms_.size() == 1) return o.mul_term(terms_[0].m, terms_[0].c);
    std::vector<Term> all;
    all.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) all.push_back({a.m * b.m, field().mul(a.c, b.c)});
    return from_terms(ring_, std::move(all));
}

Poly Poly::pow(unsigned e) const {
    Poly r = constant(ring_, 1), base = *this;
    while (e) {
        if (e & 1) r *= base;
        if (e >>= 1) base *= base;
    }
    return r;
}

Poly Poly::frobenius(unsigned e) const {
    std::uint32_t p = field().characteristic();
    if (p == 0) throw RingError("frobenius requires positive characteristic");
    std::int64_t q = 1;
    for (unsigned i = 0; i < e; ++i) {
        q *= p;
        if (q > std::numeric_limits<std::int32_t>::max()) throw RingError("exponent overflow");
    }
    Poly r(ring_);
    for (const auto& t : terms_) {
        Term u{Mono{}, field().pow(t.c, static_cast<unsigned long>(q))};
        for (int i = 0; i < kMaxVars; ++i) u.m.e[i] = checked_exp(std::int64_t(t.m.e[i]) * q);
        u.m.deg = checked_exp(std::int64_t(t.m.deg) * q);
        r.terms_.push_back(u);
    }
    // x -> x^q is strictly monotone for both orders, so the term order is preserved.
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].m == o.terms_[i].m) || terms_[i].c != o.terms_[i].c) return false;
    return true;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    const Field& F = field();
    std::string out;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const Term& t = terms_[k];
        std::string c = F.to_string(t.c);
        bool negative = c[0] == '-';
        if (negative) c.erase(0, 1);
        if (k == 0)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        std::string mono;
        for (int i = 0; i < ring_->nvars(); ++i) {
            if (!t.m.e[i]) continue;
            if (!mono.empty()) mono += '*';
            mono += ring_->names()[i];
            if (t.m.e[i] > 1) mono += '^' + std::to_string(t.m.e[i]);
        }
        if (mono.empty())
            out += c;
        else if (c == "1")
            out += mono;
        else
            out += c + '*' + mono;
    }
    return out;
}

namespace {

struct Parser {
    const RingPtr& ring;
    const std::string& s;
    std::size_t i = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw RingError("parse error at offset " + std::to_string(i) + " in '" + s + "': " + what);
    }
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        skip();
        return i < s.size() && s[i] == c;
    }
    mpz_class integer() {
        skip();
        std::size_t b = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (b == i) fail("expected integer");
        return mpz_class(s.substr(b, i - b));
    }
    int variable() {
        skip();
        std::size_t b = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
        std::string name = s.substr(b, i - b);
        const auto& names = ring->names();
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) fail("unknown variable '" + name + "'");
        return static_cast<int>(it - names.begin());
    }
    // factor := integer ['/' integer] | var ['^' integer]
    void factor(Term& t) {
        skip();
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            mpq_class v(integer());
            if (peek('/')) {
                ++i;
                mpz_class den = integer();
                if (den == 0) fail("zero denominator");
                v /= mpq_class(den);
            }
            t.c *= v;
            return;
        }
        int v = variable();
        std::int64_t e = 1;
        if (peek('^')) {
            ++i;
            mpz_class z = integer();
            if (!z.fits_sint_p()) fail("exponent overflow");
            e = z.get_si();
        }
        t.m.e[v] = checked_exp(t.m.e[v] + e);
        t.m.deg = checked_exp(t.m.deg + e);
    }
    Poly run() {
        std::vector<Term> terms;
        bool first = true;
        skip();
        if (i == s.size()) fail("empty polynomial");
        while (true) {
            skip();
            if (i == s.size()) break;
            mpq_class sign = 1;
            if (s[i] == '+' || s[i] == '-') {
                sign = s[i] == '-' ? -1 : 1;
                ++i;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            Term t{Mono{}, sign};
            factor(t);
            while (peek('*')) {
                ++i;
                factor(t);
            }
            t.c = ring->field().from_rational(t.c);
            terms.push_back(t);
            first = false;
        }
        return Poly::from_terms(ring, std::move(terms));
    }
};

}  // namespace

Poly Poly::parse(RingPtr ring, const std::string& text) {
    Parser p{ring, text};
    return p.run();
}

}  // namespace dmflag
