#include "slicekit/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <vector>

#include "slicekit/errors.hpp"

namespace slicekit {

const char* error_kind_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
        case ErrorKind::NotAKnot: return "NotAKnot";
        case ErrorKind::NotCyclic: return "NotCyclic";
        case ErrorKind::UnsupportedModule: return "UnsupportedModule";
        case ErrorKind::WrongGenus: return "WrongGenus";
        case ErrorKind::NotRepresentable: return "NotRepresentable";
        case ErrorKind::NotMetabolic: return "NotMetabolic";
        case ErrorKind::RankMismatch: return "RankMismatch";
        case ErrorKind::NotIsotropic: return "NotIsotropic";
        case ErrorKind::MissingBaseFact: return "MissingBaseFact";
        case ErrorKind::UnsupportedLink: return "UnsupportedLink";
        case ErrorKind::Schema: return "Schema";
    }
    return "Unknown";
}

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty rational");
    bool neg = false;
    std::string body = s;
    if (body[0] == '+' || body[0] == '-') {
        neg = body[0] == '-';
        body = body.substr(1);
    }
    Rational out;
    auto slash = body.find('/');
    if (slash != std::string::npos) {
        std::string num = trim(body.substr(0, slash)), den = trim(body.substr(slash + 1));
        if (!all_digits(num) || !all_digits(den))
            throw Error(ErrorKind::InvalidArgument, "malformed rational '" + s + "'");
        Integer d(den);
        if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + s + "'");
        out = Rational(Integer(num), d);
        out.canonicalize();
    } else {
        std::string mant = body;
        long exp10 = 0;
        auto e = body.find_first_of("eE");
        if (e != std::string::npos) {
            mant = body.substr(0, e);
            std::string ex = body.substr(e + 1);
            bool eneg = false;
            if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
                eneg = ex[0] == '-';
                ex = ex.substr(1);
            }
            if (!all_digits(ex) || ex.size() > 6)
                throw Error(ErrorKind::InvalidArgument, "malformed exponent in '" + s + "'");
            exp10 = std::stol(ex) * (eneg ? -1 : 1);
        }
        std::string digits = mant;
        auto dot = mant.find('.');
        if (dot != std::string::npos) {
            digits = mant.substr(0, dot) + mant.substr(dot + 1);
            exp10 -= static_cast<long>(mant.size() - dot - 1);
        }
        if (!all_digits(digits)) throw Error(ErrorKind::InvalidArgument, "malformed rational '" + s + "'");
        Integer m(digits);
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        out = exp10 < 0 ? Rational(m, p) : Rational(m * p);
        out.canonicalize();
    }
    return neg ? Rational(-out) : out;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_decimal(const Rational& q, int digits) {
    mpfr_t x;
    mpfr_init2(x, 256);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
    std::vector<char> buf(digits + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, x);
    mpfr_clear(x);
    return std::string(buf.data());
}

}  // namespace slicekit
