#pragma once

#include <stdexcept>
#include <string>

namespace maval {

// Error categories, mapped by the CLI onto process exit codes:
//   schema    -> 2  (malformed input, unknown fields, wrong types)
//   domain    -> 3  (precondition violated, computation impossible)
//   invariant -> 4  (internal self-check failed; indicates a bug)
enum class errc { schema, domain, invariant };

class error : public std::runtime_error {
public:
  error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  errc kind() const { return kind_; }

private:
  errc kind_;
};

[[noreturn]] inline void throw_schema(const std::string& msg) { throw error(errc::schema, msg); }
[[noreturn]] inline void throw_domain(const std::string& msg) { throw error(errc::domain, msg); }
[[noreturn]] inline void throw_invariant(const std::string& msg) { throw error(errc::invariant, msg); }

inline void require_domain(bool cond, const std::string& msg) {
  if (!cond) throw_domain(msg);
}
inline void require_invariant(bool cond, const std::string& msg) {
  if (!cond) throw_invariant(msg);
}

}  // namespace maval
