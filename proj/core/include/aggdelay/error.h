#ifndef AGGDELAY_ERROR_H_
#define AGGDELAY_ERROR_H_

#include <stdexcept>
#include <string>

namespace aggdelay {

// Raised when an input violates an operation's precondition (k < 1,
// non-positive rates, malformed search ranges, ...). Unbounded delays are
// never reported through this; they are ordinary return values.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace aggdelay

#endif  // AGGDELAY_ERROR_H_
