#include "softppg/error.hpp"

namespace softppg {

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_format: return 2;
        case ErrorKind::invalid_argument:
        case ErrorKind::invalid_config: return 3;
        case ErrorKind::insufficient_data: return 4;
        case ErrorKind::io: return 1;
    }
    return 1;
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace softppg
