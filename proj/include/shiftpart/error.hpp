#pragma once

#include <stdexcept>
#include <string>

namespace shiftpart {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct conductor_error : error { using error::error; };
struct lattice_error : error { using error::error; };
struct precision_error : error { using error::error; };
struct integrality_error : error { using error::error; };
struct divisibility_error : error { using error::error; };
struct domain_error : error { using error::error; };
struct limit_error : error { using error::error; };
struct holomorphy_error : error { using error::error; };
struct overflow_error : error { using error::error; };

}  // namespace shiftpart
