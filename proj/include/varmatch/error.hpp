#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace varmatch {

/// Typed failure categories. The string form (see to_string) is the stable
/// name reported by the CLI and carried by bindings.
enum class Errc {
  io_error,
  format_error,
  degenerate_output,
  multichannel_input,
  overflow_risk,
  out_of_bounds,
  image_too_small,
  insufficient_pairs,
  empty_bank,
  shape_mismatch,
  too_small,
  empty_corpus,
  filename_mismatch,
  image_not_found,
  config_error,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  Errc code_;
};

/// Raised by sample_batch when the retry budget is exhausted.
class InsufficientPairs : public Error {
 public:
  InsufficientPairs(std::size_t achieved, std::size_t required, int rounds);

  std::size_t achieved() const noexcept { return achieved_; }
  std::size_t required() const noexcept { return required_; }
  int rounds() const noexcept { return rounds_; }

 private:
  std::size_t achieved_;
  std::size_t required_;
  int rounds_;
};

}  // namespace varmatch
