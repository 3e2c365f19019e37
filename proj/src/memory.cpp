#include "sasm/memory.hpp"

#include <stdexcept>
#include <string>

namespace sasm {

std::string_view toString(MemoryPolicy p) {
  switch (p) {
  case MemoryPolicy::None:
    return "none";
  case MemoryPolicy::Sparse:
    return "sparse";
  case MemoryPolicy::SparseWithOFS:
    return "sparse+ofs";
  case MemoryPolicy::Dense:
    return "dense";
  case MemoryPolicy::SparseDelaying:
    return "delaying";
  }
  return "unknown";
}

MemoryPolicy parseMemoryPolicy(std::string_view name) {
  for (auto p : {MemoryPolicy::None, MemoryPolicy::Sparse, MemoryPolicy::SparseWithOFS,
                 MemoryPolicy::Dense, MemoryPolicy::SparseDelaying})
    if (toString(p) == name)
      return p;
  throw std::invalid_argument("unknown memory policy '" + std::string(name) +
                              "' (expected none|sparse|sparse+ofs|dense|delaying)");
}

} // namespace sasm
