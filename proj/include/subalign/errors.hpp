#pragma once

#include <stdexcept>
#include <string>

namespace subalign {

// Error classes surfaced by the pipeline. The CLI maps these to exit codes.
enum class errc {
  undecodable_input = 2,
  document_rejected = 3,
  format_error = 4,
  degenerate_input = 5,
  insufficient_data = 6,
  template_too_small = 7,
  count_overflow = 8,
  resource_error = 9,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

}  // namespace subalign
