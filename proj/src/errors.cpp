#include "magblock/errors.hpp"

namespace magblock {

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ValidationError*>(&e) != nullptr) return 1;
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return 2;
  if (dynamic_cast<const IoError*>(&e) != nullptr) return 3;
  return 2;
}

}  // namespace magblock
