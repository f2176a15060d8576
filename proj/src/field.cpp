#include "hdx/field.hpp"

#include <charconv>
#include <string>

#include "hdx/errors.hpp"

namespace hdx {

namespace {

int mod(long v, int p) noexcept {
    long r = v % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

// Remainder of a by monic b over F_p; both low-first. Result has length deg(b).
std::vector<int> poly_rem(std::vector<int> a, std::span<const int> b, int p) {
    const int db = static_cast<int>(b.size()) - 1;
    for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
        const int lead = a[i];
        if (lead == 0) continue;
        for (int j = 0; j <= db; ++j) a[i - db + j] = mod(a[i - db + j] - static_cast<long>(lead) * b[j], p);
    }
    a.resize(db);
    return a;
}

}  // namespace

bool is_prime(int n) noexcept {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_irreducible(int p, std::span<const int> f) {
    const int deg = static_cast<int>(f.size()) - 1;
    if (deg < 1 || f[deg] != 1) throw DomainError("is_irreducible: modulus must be monic of degree >= 1");
    if (deg == 1) return true;
    std::vector<int> a(f.begin(), f.end());
    for (int dg = 1; dg <= deg / 2; ++dg) {
        std::uint64_t count = 1;
        for (int i = 0; i < dg; ++i) count *= static_cast<std::uint64_t>(p);
        std::vector<int> g(dg + 1, 0);
        g[dg] = 1;
        for (std::uint64_t code = 0; code < count; ++code) {
            std::uint64_t c = code;
            for (int i = 0; i < dg; ++i) {
                g[i] = static_cast<int>(c % p);
                c /= p;
            }
            const auto r = poly_rem(a, g, p);
            bool zero = true;
            for (int v : r) zero = zero && v == 0;
            if (zero) return false;
        }
    }
    return true;
}

std::vector<int> find_irreducible(int p, int m) {
    if (!is_prime(p)) throw DomainError("find_irreducible: p must be prime");
    if (m < 1) throw DomainError("find_irreducible: m must be positive");
    std::uint64_t count = 1;
    for (int i = 0; i < m; ++i) count *= static_cast<std::uint64_t>(p);
    std::vector<int> f(m + 1, 0);
    f[m] = 1;
    for (std::uint64_t code = 0; code < count; ++code) {
        std::uint64_t c = code;
        for (int i = 0; i < m; ++i) {
            f[i] = static_cast<int>(c % p);
            c /= p;
        }
        if (is_irreducible(p, f)) return f;
    }
    throw IntegrityError("find_irreducible: no irreducible polynomial found");
}

Field::Field(int p, int m) : Field(p, find_irreducible(p, m)) {}

Field::Field(int p, std::vector<int> modulus) : p_(p), m_(static_cast<int>(modulus.size()) - 1), modulus_(std::move(modulus)) {
    if (!is_prime(p_) || p_ > 251) throw DomainError("Field: p must be a prime <= 251");
    if (m_ < 1 || m_ > kMaxExtension) throw DomainError("Field: extension degree out of range");
    for (int& c : modulus_) c = mod(c, p_);
    if (modulus_.back() != 1) throw DomainError("Field: modulus must be monic");
    if (!is_irreducible(p_, modulus_)) throw DomainError("Field: modulus is reducible");
    order_ = 1;
    for (int i = 0; i < m_; ++i) {
        if (order_ > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(p_)) throw DomainError("Field: order too large");
        order_ *= static_cast<std::uint64_t>(p_);
    }
}

FieldElem Field::from_int(long v) const noexcept {
    FieldElem e;
    e.c[0] = static_cast<std::uint8_t>(mod(v, p_));
    return e;
}

FieldElem Field::x() const { return monomial(1); }

FieldElem Field::monomial(int e) const {
    if (e < 0) throw DomainError("monomial: negative exponent");
    if (e < m_) {
        FieldElem r;
        r.c[e] = 1;
        return r;
    }
    return pow(monomial(1), static_cast<std::uint64_t>(e));
}

FieldElem Field::from_coeffs(std::span<const int> coeffs) const {
    std::vector<int> a(coeffs.begin(), coeffs.end());
    for (int& v : a) v = mod(v, p_);
    if (static_cast<int>(a.size()) > m_) a = poly_rem(a, modulus_, p_);
    FieldElem r;
    for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = static_cast<std::uint8_t>(a[i]);
    return r;
}

FieldElem Field::add(const FieldElem& a, const FieldElem& b) const noexcept {
    FieldElem r;
    for (int i = 0; i < m_; ++i) {
        int v = a.c[i] + b.c[i];
        r.c[i] = static_cast<std::uint8_t>(v >= p_ ? v - p_ : v);
    }
    return r;
}

FieldElem Field::sub(const FieldElem& a, const FieldElem& b) const noexcept {
    FieldElem r;
    for (int i = 0; i < m_; ++i) {
        int v = a.c[i] - b.c[i];
        r.c[i] = static_cast<std::uint8_t>(v < 0 ? v + p_ : v);
    }
    return r;
}

FieldElem Field::neg(const FieldElem& a) const noexcept {
    FieldElem r;
    for (int i = 0; i < m_; ++i) r.c[i] = static_cast<std::uint8_t>(a.c[i] == 0 ? 0 : p_ - a.c[i]);
    return r;
}

FieldElem Field::scale(const FieldElem& a, long k) const noexcept {
    const int kk = mod(k, p_);
    FieldElem r;
    for (int i = 0; i < m_; ++i) r.c[i] = static_cast<std::uint8_t>((a.c[i] * kk) % p_);
    return r;
}

FieldElem Field::mul(const FieldElem& a, const FieldElem& b) const noexcept {
    if (m_ == 1) {
        FieldElem r;
        r.c[0] = static_cast<std::uint8_t>((a.c[0] * b.c[0]) % p_);
        return r;
    }
    std::array<int, 2 * kMaxExtension> t{};
    for (int i = 0; i < m_; ++i) {
        if (a.c[i] == 0) continue;
        for (int j = 0; j < m_; ++j) t[i + j] += a.c[i] * b.c[j];
    }
    for (int i = 0; i < 2 * m_ - 1; ++i) t[i] %= p_;
    for (int i = 2 * m_ - 2; i >= m_; --i) {
        const int lead = t[i];
        if (lead == 0) continue;
        for (int j = 0; j < m_; ++j) t[i - m_ + j] = (t[i - m_ + j] + (p_ - lead) * modulus_[j]) % p_;
        t[i] = 0;
    }
    FieldElem r;
    for (int i = 0; i < m_; ++i) r.c[i] = static_cast<std::uint8_t>(t[i]);
    return r;
}

FieldElem Field::pow(const FieldElem& a, std::uint64_t e) const noexcept {
    FieldElem result = one();
    FieldElem base = a;
    while (e > 0) {
        if (e & 1U) result = mul(result, base);
        base = mul(base, base);
        e >>= 1U;
    }
    return result;
}

FieldElem Field::inv(const FieldElem& a) const {
    if (a.is_zero()) throw DomainError("inv: zero has no inverse");
    return pow(a, order_ - 2);
}

std::uint64_t Field::encode(const FieldElem& a) const noexcept {
    std::uint64_t code = 0;
    for (int i = m_ - 1; i >= 0; --i) code = code * static_cast<std::uint64_t>(p_) + a.c[i];
    return code;
}

FieldElem Field::decode(std::uint64_t code) const noexcept {
    FieldElem r;
    for (int i = 0; i < m_; ++i) {
        r.c[i] = static_cast<std::uint8_t>(code % static_cast<std::uint64_t>(p_));
        code /= static_cast<std::uint64_t>(p_);
    }
    return r;
}

std::uint64_t Field::count_up_to_degree(int k) const {
    if (k < -1) throw DomainError("elements_up_to_degree: k must be >= -1");
    std::uint64_t n = 1;
    for (int i = 0; i <= cap(k); ++i) n *= static_cast<std::uint64_t>(p_);
    return n;
}

std::vector<FieldElem> Field::elements_up_to_degree(int k) const {
    const std::uint64_t n = count_up_to_degree(k);
    std::vector<FieldElem> out;
    out.reserve(n);
    for (std::uint64_t code = 0; code < n; ++code) out.push_back(decode(code));
    return out;
}

std::string Field::to_string(const FieldElem& a) const {
    std::string s;
    for (int i = 0; i < m_; ++i) {
        if (i) s += ',';
        s += std::to_string(a.c[i]);
    }
    return s;
}

FieldElem Field::parse(std::string_view s) const {
    std::vector<int> coeffs;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t end = s.find(',', pos);
        if (end == std::string_view::npos) end = s.size();
        const auto tok = s.substr(pos, end - pos);
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw DomainError("parse: bad field element '" + std::string(s) + "'");
        coeffs.push_back(v);
        pos = end + 1;
    }
    if (static_cast<int>(coeffs.size()) > m_) throw DomainError("parse: more than m coefficients in '" + std::string(s) + "'");
    return from_coeffs(coeffs);
}

TableField::TableField(const Field& f) : field_(f), q_(static_cast<int>(f.order())) {
    if (f.order() > 4096) throw ResourceError("table arithmetic limited to q <= 4096");
    const auto n = static_cast<std::size_t>(q_);
    add_.resize(n * n);
    mul_.resize(n * n);
    neg_.resize(n);
    std::vector<FieldElem> el(n);
    for (std::size_t a = 0; a < n; ++a) el[a] = f.decode(a);
    for (std::size_t a = 0; a < n; ++a) {
        neg_[a] = static_cast<std::uint16_t>(f.encode(f.neg(el[a])));
        for (std::size_t b = 0; b < n; ++b) {
            add_[a * n + b] = static_cast<std::uint16_t>(f.encode(f.add(el[a], el[b])));
            mul_[a * n + b] = static_cast<std::uint16_t>(f.encode(f.mul(el[a], el[b])));
        }
    }
}

std::uint16_t TableField::from_int(long v) const { return static_cast<std::uint16_t>(field_.encode(field_.from_int(v))); }

}  // namespace hdx
