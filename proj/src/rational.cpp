#include "ppda/rational.hh"

#include "ppda/error.hh"

#include <cctype>

namespace ppda {

const char* errorCodeName(ErrorCode c)
{
    switch (c) {
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Unvalidated: return "UNVALIDATED";
    case ErrorCode::UnknownState: return "UNKNOWN_STATE";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::SupportTooLarge: return "SUPPORT_TOO_LARGE";
    case ErrorCode::NotVisibly: return "NOT_VISIBLY";
    case ErrorCode::NotPoca: return "NOT_POCA";
    case ErrorCode::NotVpda: return "NOT_VPDA";
    case ErrorCode::NotPvpda: return "NOT_PVPDA";
    case ErrorCode::Frontier: return "FRONTIER";
    case ErrorCode::MalformedCertificate: return "MALFORMED_CERTIFICATE";
    case ErrorCode::Shape: return "SHAPE";
    case ErrorCode::Redefined: return "REDEFINED";
    }
    return "UNKNOWN";
}

Rational::Rational(long n, long d)
{
    if (d == 0)
        throw Error(ErrorCode::Parse, "zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

static bool allDigits(const std::string& s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

Rational Rational::parse(const std::string& text)
{
    bool neg = !text.empty() && text[0] == '-';
    std::string s = neg ? text.substr(1) : text;
    auto slash = s.find('/');
    auto dot = s.find('.');
    Rational r;
    if (slash != std::string::npos) {
        std::string n = s.substr(0, slash), d = s.substr(slash + 1);
        if (!allDigits(n) || !allDigits(d))
            throw Error(ErrorCode::Parse, "bad rational '" + text + "'");
        mpz_class den(d, 10);
        if (den == 0)
            throw Error(ErrorCode::Parse, "zero denominator in '" + text + "'");
        r.v_ = mpq_class(mpz_class(n, 10), den);
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if ((!ip.empty() && !allDigits(ip)) || (!fp.empty() && !allDigits(fp)) || (ip.empty() && fp.empty()))
            throw Error(ErrorCode::Parse, "bad decimal '" + text + "'");
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        mpz_class num = mpz_class(ip.empty() ? "0" : ip, 10) * scale + mpz_class(fp.empty() ? "0" : fp, 10);
        r.v_ = mpq_class(num, scale);
    } else {
        if (!allDigits(s))
            throw Error(ErrorCode::Parse, "bad number '" + text + "'");
        r.v_ = mpq_class(mpz_class(s, 10), 1);
    }
    r.v_.canonicalize();
    if (neg)
        r.v_ = -r.v_;
    return r;
}

std::string Rational::str() const
{
    if (v_.get_den() == 1)
        return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::size_t Rational::hash() const
{
    // low limbs only; collisions are resolved by equality
    std::size_t h1 = mpz_get_ui(v_.get_num_mpz_t());
    std::size_t h2 = mpz_get_ui(v_.get_den_mpz_t());
    return h1 ^ (h2 * 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace ppda
