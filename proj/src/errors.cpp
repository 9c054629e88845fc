#include "bohm/errors.hpp"

#include <cstdio>

namespace bohm {

namespace {

std::string describe_node(double x, double t, double density) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "wave-function node reached at x=%.17g t=%.17g (|psi|^2=%.3e)", x,
                t, density);
  return buf;
}

}  // namespace

NodeEncountered::NodeEncountered(double x, double t, double density)
    : std::runtime_error(describe_node(x, t, density)), x_(x), t_(t), density_(density) {}

}  // namespace bohm
