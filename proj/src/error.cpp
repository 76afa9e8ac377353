#include "varmatch/error.hpp"

namespace varmatch {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::io_error: return "io-error";
    case Errc::format_error: return "format-error";
    case Errc::degenerate_output: return "degenerate-output";
    case Errc::multichannel_input: return "multichannel-input";
    case Errc::overflow_risk: return "overflow-risk";
    case Errc::out_of_bounds: return "out-of-bounds";
    case Errc::image_too_small: return "image-too-small";
    case Errc::insufficient_pairs: return "insufficient-pairs";
    case Errc::empty_bank: return "empty-bank";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::too_small: return "too-small";
    case Errc::empty_corpus: return "empty-corpus";
    case Errc::filename_mismatch: return "filename-mismatch";
    case Errc::image_not_found: return "image-not-found";
    case Errc::config_error: return "config-error";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

InsufficientPairs::InsufficientPairs(std::size_t achieved, std::size_t required, int rounds)
    : Error(Errc::insufficient_pairs,
            "accumulated " + std::to_string(achieved) + " of " + std::to_string(required) +
                " pairs after " + std::to_string(rounds) + " rounds"),
      achieved_(achieved),
      required_(required),
      rounds_(rounds) {}

}  // namespace varmatch
