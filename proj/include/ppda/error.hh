// error.hh -- error codes shared by all modules
#ifndef PPDA_ERROR_HH
#define PPDA_ERROR_HH

#include <stdexcept>
#include <string>

namespace ppda {

enum class ErrorCode {
    Parse,
    Unvalidated,
    UnknownState,
    BudgetExceeded,
    SupportTooLarge,
    NotVisibly,
    NotPoca,
    NotVpda,
    NotPvpda,
    Frontier,
    MalformedCertificate,
    Shape,
    Redefined,
};

const char* errorCodeName(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(errorCodeName(code)) + ": " + msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace ppda

#endif
