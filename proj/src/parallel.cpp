#include "rmflab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rmflab {

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RMFLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // unparsable values fall through to the hardware count
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace rmflab
