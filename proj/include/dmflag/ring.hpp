#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmflag {

inline constexpr int kMaxVars = 8;

struct RingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coefficient field: the rationals or F_p.
/// Elements are mpq_class; over F_p they are kept as integers in [0, p).
class Field {
public:
    static Field rationals() { return Field(0); }
    static Field prime(std::uint32_t p);

    std::uint32_t characteristic() const { return p_; }
    bool is_rationals() const { return p_ == 0; }

    mpq_class from_int(long v) const;
    mpq_class from_rational(const mpq_class& v) const;
    mpq_class add(const mpq_class& a, const mpq_class& b) const;
    mpq_class sub(const mpq_class& a, const mpq_class& b) const;
    mpq_class mul(const mpq_class& a, const mpq_class& b) const;
    mpq_class neg(const mpq_class& a) const;
    mpq_class inv(const mpq_class& a) const;
    mpq_class div(const mpq_class& a, const mpq_class& b) const { return mul(a, inv(b)); }
    mpq_class pow(mpq_class a, unsigned long e) const;

    /// Symmetric representative for F_p, plain value over Q.
    std::string to_string(const mpq_class& a) const;

    bool operator==(const Field& o) const { return p_ == o.p_; }

private:
    explicit Field(std::uint32_t p) : p_(p) {}
    mpq_class reduce(const mpq_class& v) const;
    std::uint32_t p_;
};

enum class MonoOrder { grevlex, lex };

struct Mono {
    std::array<std::int32_t, kMaxVars> e{};
    std::int32_t deg = 0;

    bool operator==(const Mono& o) const { return e == o.e; }
    bool divides(const Mono& o, int nvars) const;
    Mono operator*(const Mono& o) const;
    /// this / o; caller guarantees divisibility.
    Mono quo(const Mono& o) const;
    Mono lcm(const Mono& o, int nvars) const;
    bool coprime(const Mono& o, int nvars) const;
    bool is_one() const { return deg == 0; }
};

class Ring {
public:
    Ring(Field field, int nvars, MonoOrder order = MonoOrder::grevlex,
         std::vector<std::string> names = {});

    const Field& field() const { return field_; }
    int nvars() const { return nvars_; }
    MonoOrder order() const { return order_; }
    const std::vector<std::string>& names() const { return names_; }

    /// Three-way comparison under the ring's order: >0 when a is larger.
    int cmp(const Mono& a, const Mono& b) const;
    bool same_as(const Ring& o) const {
        return field_ == o.field_ && nvars_ == o.nvars_ && order_ == o.order_;
    }

private:
    Field field_;
    int nvars_;
    MonoOrder order_;
    std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(Field field, int nvars, MonoOrder order = MonoOrder::grevlex,
                  std::vector<std::string> names = {});

struct Term {
    Mono m;
    mpq_class c;
};

/// Sparse polynomial; terms sorted strictly descending in the ring order, no zero coefficients.
class Poly {
public:
    Poly() = default;
    explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

    static Poly constant(RingPtr ring, const mpq_class& c);
    static Poly constant(RingPtr ring, long c) { return constant(ring, mpq_class(c)); }
    static Poly var(RingPtr ring, int i, int power = 1);
    static Poly monomial(RingPtr ring, const Mono& m, const mpq_class& c);
    static Poly parse(RingPtr ring, const std::string& text);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
    /// Nonzero constant.
    bool is_unit() const { return terms_.size() == 1 && terms_[0].m.is_one(); }
    mpq_class constant_term() const;
    const Term& lead() const { return terms_.front(); }

    /// Total degree; nullopt for the zero polynomial.
    std::optional<int> degree() const;
    bool is_homogeneous() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly scale(const mpq_class& c) const;
    Poly mul_term(const Mono& m, const mpq_class& c) const;
    Poly pow(unsigned e) const;

    /// x_i -> x_i^{p^e}, c -> c^{p^e}.
    Poly frobenius(unsigned e) const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    std::string to_string() const;

    /// Build from unsorted terms; combines duplicates and drops zeros.
    static Poly from_terms(RingPtr ring, std::vector<Term> terms);

private:
    const Field& field() const { return ring_->field(); }
    void check_ring(const Poly& o) const;

    RingPtr ring_;
    std::vector<Term> terms_;
};

}  // namespace dmflag
